//! Command implementations shared by the binary and the C interface. Every
//! command turns its input text into a [`Report`].

use serde_json::{json, Value};

use crate::ample::{
    effective_bounds, enumerate_gram, make_ample, make_ample_minimal, reider_class,
    EnumerateOptions,
};
use crate::blowup::{run_script, BlowupScript};
use crate::cone::{certify_fpmc, check_almost_fpmc, ConeStatus};
use crate::error::{Error, Result};
use crate::fixtures::{fixture, FixturePayload, FixtureParams, FIXTURE_IDS};
use crate::io::{parse_config, parse_divisor, parse_divisor_list, serialize_config, ConfigFile};
use crate::lattice::{enumerate_bounded_classes, Lattice};
use crate::report::{bigints_value, Report, Status};
use crate::roots::{case2b_criterion, classify_minus2_components, fiber_divisor_and_index, mw_group, verify_mw_table, FiberTypeList};

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload serializes")
}

/// Runs `f`, turning an error into an error report.
pub fn run(command: &str, input: &[u8], f: impl FnOnce() -> Result<(Status, Value)>) -> Report {
    match f() {
        Ok((status, payload)) => Report::new(command, input, status, payload),
        Err(e) => Report::from_error(command, input, &e),
    }
}

pub fn analyze(text: &str) -> Report {
    run("analyze", text.as_bytes(), || {
        let c = parse_config(text)?;
        let v = c.validate()?;
        let canonical = match c.canonical_class() {
            Ok(k) => to_value(&k),
            Err(e) => json!({ "error": e.kind(), "message": e.to_string() }),
        };
        let spanning = match c.find_spanning_subsets(true) {
            Ok(s) => to_value(&s.first()),
            Err(e) => json!({ "error": e.kind(), "message": e.to_string() }),
        };
        Ok((
            Status::Ok,
            json!({
                "name": c.name(),
                "invariants": v.invariants,
                "signature": v.signature,
                "graph": v.graph,
                "warnings": v.warnings,
                "canonical_class": canonical,
                "spanning_subset": spanning,
            }),
        ))
    })
}

pub fn certify(text: &str) -> Report {
    run("certify", text.as_bytes(), || {
        let c = parse_config(text)?;
        let cert = certify_fpmc(&c)?;
        let status = match cert.status {
            ConeStatus::Certified => Status::Certified,
            ConeStatus::Refuted => Status::Refuted,
        };
        let mut payload = to_value(&cert);
        payload["basis_names"] = json!(cert.basis.iter().map(|&i| c.curves()[i].name.clone()).collect::<Vec<_>>());
        if let Some(w) = cert.witness_ray() {
            payload["witness_ray"] = bigints_value(w);
        }
        Ok((status, payload))
    })
}

pub fn ample(text: &str, minimal: bool, reider: bool) -> Report {
    run("ample", text.as_bytes(), || {
        let c = parse_config(text)?;
        let cert = if minimal {
            make_ample_minimal(c.gram())?
        } else {
            make_ample(c.gram())?
        };
        let mut payload = json!({ "certificate": cert, "verified": cert.verify(c.gram()) });
        if reider {
            payload["reider"] = to_value(&reider_class(&c, &cert)?);
        }
        Ok((Status::Ok, payload))
    })
}

pub fn roots(text: &str) -> Report {
    run("roots", text.as_bytes(), || {
        let c = parse_config(text)?;
        let comps = classify_minus2_components(&c);
        let kinds: Vec<String> = comps.iter().map(|r| r.kind.to_string()).collect();
        Ok((Status::Ok, json!({ "components": comps, "kinds": kinds })))
    })
}

pub fn case2b(text: &str) -> Report {
    run("case2b", text.as_bytes(), || {
        let c = parse_config(text)?;
        let rep = case2b_criterion(&c)?;
        let fibers: Vec<Value> = rep
            .components
            .iter()
            .filter(|r| r.kind.is_affine())
            .map(|r| match fiber_divisor_and_index(&c, r) {
                Ok(f) => to_value(&f),
                Err(e) => json!({ "error": e.kind(), "message": e.to_string() }),
            })
            .collect();
        let status = if rep.holds { Status::Ok } else { Status::Failed };
        let mut payload = to_value(&rep);
        payload["fiber_divisors"] = Value::Array(fibers);
        Ok((status, payload))
    })
}

pub struct EnumerateArgs {
    pub rho: usize,
    pub delta: u64,
    pub bounds: bool,
    pub pmax: Option<u64>,
    pub max_offdiag: Option<i64>,
}

pub fn enumerate(args: &EnumerateArgs) -> Report {
    let input = format!(
        "rho={} delta={} bounds={} pmax={:?} max_offdiag={:?}",
        args.rho, args.delta, args.bounds, args.pmax, args.max_offdiag
    );
    run("enumerate-gram", input.as_bytes(), || {
        let opts = EnumerateOptions {
            max_offdiag: args.max_offdiag,
        };
        let mats = enumerate_gram(args.rho, args.delta, opts)?;
        let mut payload = json!({
            "rho": args.rho,
            "delta_e": args.delta,
            "count": mats.len(),
            "matrices": mats.iter().map(|m| m.rows()).collect::<Vec<_>>(),
        });
        if args.bounds {
            payload["summary"] = to_value(&effective_bounds(args.rho, args.delta, args.pmax, opts)?);
        }
        Ok((Status::Ok, payload))
    })
}

pub fn classes(text: &str, delta: u64, pmax: u64) -> Report {
    run("classes", text.as_bytes(), || {
        let c = parse_config(text)?;
        let k = c.canonical_class()?;
        let basis = k.basis.clone();
        let lattice = Lattice::new(
            c.gram().principal_submatrix(&basis),
            basis.iter().map(|&i| c.curves()[i].name.clone()).collect(),
        )?;
        let kb: Vec<_> = basis.iter().map(|&i| k.divisor.coeffs[i].clone()).collect();
        let found = enumerate_bounded_classes(&lattice, &kb, delta, pmax)?;
        Ok((
            Status::Ok,
            json!({
                "basis": lattice.basis_names(),
                "count": found.len(),
                "classes": found.iter().map(|v| bigints_value(v)).collect::<Vec<_>>(),
            }),
        ))
    })
}

pub fn mw_fibers(fibers: &str) -> Report {
    run("mw", fibers.as_bytes(), || {
        let list: FiberTypeList = fibers.parse()?;
        let g = mw_group(&list)?;
        Ok((Status::Ok, json!({ "fibers": list.to_string(), "group": g })))
    })
}

pub fn mw_verify_table() -> Report {
    run("mw", b"--verify-table", || {
        let rows = verify_mw_table();
        let pass = rows.iter().all(|r| r.pass);
        Ok((
            if pass { Status::Ok } else { Status::Failed },
            json!({ "rows": rows, "all_pass": pass }),
        ))
    })
}

pub fn blowup(text: &str) -> Report {
    run("blowup", text.as_bytes(), || {
        let script = BlowupScript::from_json(text)?;
        let r = run_script(&script)?;
        Ok((
            Status::Ok,
            json!({
                "config": ConfigFile::from_config(&r.config),
                "canonical_ambient": r.state.canonical,
                "k_square": r.k_square,
                "canonical_products": r.canonical_products,
                "classes": r.state.curves,
            }),
        ))
    })
}

pub fn fixtures_cmd(id: Option<&str>, export: bool, params: FixtureParams) -> Report {
    let input = id.unwrap_or("list").to_string();
    run("fixtures", input.as_bytes(), || {
        let Some(id) = id.filter(|i| *i != "list") else {
            let ids: Vec<Value> = FIXTURE_IDS
                .iter()
                .map(|(i, n)| json!({ "id": i, "note": n }))
                .collect();
            return Ok((Status::Ok, json!({ "fixtures": ids })));
        };
        let f = fixture(id, params)?;
        let data = match &f.payload {
            FixturePayload::Config(c) if export => serde_json::from_str(&serialize_config(c)).expect("json"),
            FixturePayload::Config(c) => json!({
                "config": ConfigFile::from_config(c),
                "invariants": c.invariants(),
                "signature": c.signature(),
            }),
            FixturePayload::Script(s) => to_value(s),
            FixturePayload::Table(rows) => to_value(rows),
        };
        if export {
            return Ok((Status::Ok, data));
        }
        Ok((Status::Ok, json!({ "id": f.id, "note": f.note, "data": data })))
    })
}

pub fn almost(text: &str, r: &str, gens: Option<&str>, r_bound: Option<i64>) -> Report {
    run("almost", text.as_bytes(), || {
        let c = parse_config(text)?;
        let rd = parse_divisor(r, c.len())?;
        let g = match gens {
            Some(t) => parse_divisor_list(t, c.len())?,
            None => Vec::new(),
        };
        let rep = check_almost_fpmc(&c, &rd, &g, r_bound)?;
        let status = if rep.passes() { Status::Ok } else { Status::Failed };
        Ok((status, to_value(&rep)))
    })
}

/// Short human-readable rendering of a report.
pub fn render_human(r: &Report) -> String {
    let mut out = format!("{}: {}\n", r.command, serde_json::to_value(r.status).unwrap().as_str().unwrap_or("?"));
    if let Value::Object(map) = &r.payload {
        for (k, v) in map {
            let s = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let s = if s.len() > 400 { format!("{}...", &s[..400]) } else { s };
            out.push_str(&format!("  {k}: {s}\n"));
        }
    }
    out
}

/// `Err` variant helper for the binary: read a file with a structured error.
pub fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(path, e.to_string()))
}
