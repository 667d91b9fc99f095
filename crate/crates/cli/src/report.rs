//! JSON reports and their TSV/text renderings.
//!
//! Vertex ids and tensor indices are 1-indexed here. Floats use the shortest
//! round-trip decimal form, and key order is fixed, so identical inputs give
//! byte-identical output.

use std::fmt::Write as _;

use eigvar::oracle::OracleReport;
use eigvar::{
    ClassificationReport, EigenvarietyResult, GenTensor, Hypergraph, MClass, PerronResult,
    SmithForm,
};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::args::Format;

pub fn big(v: &BigUint) -> Value {
    v.to_u64()
        .map_or_else(|| Value::String(v.to_string()), Value::from)
}

fn big_signed(v: &BigInt) -> Value {
    v.to_i64()
        .map_or_else(|| Value::String(v.to_string()), Value::from)
}

fn one_indexed(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

pub fn tensor(t: &GenTensor) -> Value {
    let orbits: Vec<Value> = t
        .orbits()
        .map(|(e, v)| json!({ "index": one_indexed(e), "value": v }))
        .collect();
    json!({
        "order": t.order(),
        "dim": t.dim(),
        "diag": t.diag(),
        "orbits": orbits,
    })
}

pub fn m_class(c: &MClass) -> Value {
    let mut obj = Map::new();
    obj.insert("class".into(), c.name().into());
    match c {
        MClass::NotZ { orbit, value } => {
            obj.insert("orbit".into(), json!(orbit));
            obj.insert("value".into(), json!(value));
        }
        _ => {
            let cert = c
                .certificate()
                .expect("Z-tensor classes carry a certificate");
            obj.insert("shift".into(), json!(cert.shift));
            obj.insert("rho_b".into(), json!(cert.rho));
        }
    }
    Value::Object(obj)
}

pub fn perron(p: &PerronResult) -> Value {
    json!({
        "rho": p.rho,
        "v_p": p.vector,
        "lower": p.lower,
        "upper": p.upper,
        "iterations": p.iterations,
        "residual": p.residual,
    })
}

pub fn snf_summary(f: &SmithForm) -> Value {
    json!({ "d": f.mod_factors, "r": f.rank_mod() })
}

pub fn snf(f: &SmithForm, certified: Option<bool>) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), "snf".into());
    obj.insert("m".into(), f.modulus.into());
    obj.insert("rows".into(), f.integer.nrows.into());
    obj.insert("cols".into(), f.integer.ncols.into());
    obj.insert(
        "integer_factors".into(),
        f.integer.factors.iter().map(big).collect(),
    );
    obj.insert("d".into(), json!(f.mod_factors));
    obj.insert("r".into(), f.rank_mod().into());
    obj.insert("dropped".into(), f.dropped.iter().map(big).collect());
    obj.insert("transforms".into(), f.integer.transforms.is_some().into());
    if let Some(t) = &f.integer.transforms {
        let rows = |m: &eigvar::IntMatrix| -> Value {
            (0..m.nrows())
                .map(|i| m.row(i).iter().map(big_signed).collect::<Value>())
                .collect()
        };
        obj.insert("p".into(), rows(&t.p));
        obj.insert("q".into(), rows(&t.q));
    }
    if let Some(ok) = certified {
        obj.insert("certified".into(), ok.into());
    }
    Value::Object(obj)
}

pub fn eigenvariety(kind: &str, r: &EigenvarietyResult, emit_vectors: bool) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), "eigenvariety".into());
    obj.insert("tensor".into(), kind.into());
    obj.insert("lambda".into(), json!(r.lambda));
    obj.insert("v_p".into(), json!(r.perron));
    obj.insert("m".into(), r.modulus.into());
    let exps: Vec<&[u64]> = r.exponents.iter().map(|e| e.as_slice()).collect();
    obj.insert("exponents".into(), json!(exps));
    obj.insert("s".into(), r.count().into());
    obj.insert("snf".into(), snf_summary(&r.snf));
    if emit_vectors {
        let vectors: Vec<Value> = r
            .vectors()
            .map(|y| y.iter().map(|z| json!([z.re, z.im])).collect())
            .collect();
        obj.insert("vectors".into(), Value::Array(vectors));
    }
    Value::Object(obj)
}

/// Report for a signless Laplacian that does not have 0 as an eigenvalue.
pub fn empty_zero_variety(m: usize, snf: &SmithForm) -> Value {
    json!({
        "kind": "eigenvariety",
        "tensor": "signless",
        "lambda": 0.0,
        "v_p": [],
        "m": m,
        "exponents": [],
        "s": 0,
        "snf": snf_summary(snf),
    })
}

pub fn classification(h: &Hypergraph, c: &ClassificationReport) -> Value {
    json!({
        "kind": "classify",
        "n": h.n(),
        "m": h.m(),
        "edges": h.num_edges(),
        "connected": c.connected,
        "cored": c.cored,
        "odd_bipartite": c.odd_bipartite,
        "odd_colorable": c.odd_colorable,
        "witness_coloring": c.witness_coloring,
        "witness_bipartition": c.witness_bipartition.as_deref().map(one_indexed),
    })
}

pub fn oracle(r: &OracleReport, timings: bool) -> Value {
    let mut obj = Map::new();
    obj.insert("method".into(), r.method.to_string().into());
    obj.insert("candidates".into(), r.candidates.into());
    obj.insert("found".into(), r.found_count.into());
    obj.insert("expected".into(), r.expected_count.into());
    obj.insert("mismatches".into(), json!(r.mismatches));
    if timings {
        obj.insert("seconds".into(), json!(r.elapsed.as_secs_f64()));
    }
    Value::Object(obj)
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders a report object in the requested format, newline-terminated.
pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Tsv => render_tsv(report),
        Format::Text => {
            let mut out = String::new();
            if let Value::Object(obj) = report {
                for (k, v) in obj {
                    let _ = writeln!(out, "{k}: {}", scalar(v));
                }
            }
            out
        }
    }
}

fn render_tsv(report: &Value) -> String {
    let mut out = String::new();
    // eigenvariety: one exponent vector per row
    if let Some(Value::Array(rows)) = report.get("exponents") {
        let n = report
            .get("v_p")
            .and_then(Value::as_array)
            .map_or(0, Vec::len);
        let header: Vec<String> = (1..=n).map(|j| format!("phi_{j}")).collect();
        let _ = writeln!(out, "{}", header.join("\t"));
        for row in rows {
            let cells: Vec<String> = row.as_array().into_iter().flatten().map(scalar).collect();
            let _ = writeln!(out, "{}", cells.join("\t"));
        }
        return out;
    }
    if let Value::Object(obj) = report {
        for (k, v) in obj {
            let _ = writeln!(out, "{k}\t{}", scalar(v));
        }
    }
    out
}
