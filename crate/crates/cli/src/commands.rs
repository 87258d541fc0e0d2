use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use identric_core::means::{
    arithmetic_mean, gap, geometric_mean, harmonic_mean, identric_mean, q_mean, PositivePair,
};
use identric_core::thresholds::{membership, sharp_thresholds, Membership, ThresholdSet};
use identric_core::verify::{
    certify_sign, empirical_threshold, falsify, verify, Certificate, CheckArgs, CheckRegistry,
    FamilyCheck, GridSpec, NodeStatus, Sign, Spacing,
};
use identric_core::{Side, VerificationReport, Witness};
use serde_json::{json, Value};

use crate::output::{csv_string, num, opt_sci, sci, Render};

pub struct Eval {
    pair: PositivePair,
    gap: f64,
    means: [(&'static str, f64); 4],
    q: Option<(f64, f64, f64)>,
}

pub fn eval(a: f64, b: f64, ts: Option<(f64, f64)>) -> Result<Eval> {
    let pair = PositivePair::new(a, b)?;
    let q = match ts {
        Some((t, s)) => Some((t, s, q_mean(pair, t, s)?)),
        None => None,
    };
    Ok(Eval {
        pair,
        gap: gap(pair).value(),
        means: [
            ("A", arithmetic_mean(pair)),
            ("G", geometric_mean(pair)),
            ("H", harmonic_mean(pair)),
            ("I", identric_mean(pair)),
        ],
        q,
    })
}

impl Render for Eval {
    fn command(&self) -> &'static str {
        "eval"
    }

    fn human(&self) -> String {
        let mut out = format!(
            "a = {}, b = {}\nv = {}\n",
            self.pair.a(),
            self.pair.b(),
            self.gap
        );
        for (name, m) in self.means {
            let _ = writeln!(out, "{name} = {m}");
        }
        if let Some((t, s, q)) = self.q {
            let _ = writeln!(out, "Q = {q}  (t = {t}, s = {s})");
        }
        out
    }

    fn csv(&self) -> Result<String> {
        csv_string(&["a", "b", "v", "A", "G", "H", "I", "t", "s", "Q"], |w| {
            let mut row = vec![sci(self.pair.a()), sci(self.pair.b()), sci(self.gap)];
            row.extend(self.means.iter().map(|&(_, m)| sci(m)));
            row.push(opt_sci(self.q.map(|q| q.0)));
            row.push(opt_sci(self.q.map(|q| q.1)));
            row.push(opt_sci(self.q.map(|q| q.2)));
            w.write_record(&row)?;
            Ok(())
        })
    }

    fn structured(&self) -> Value {
        let mut v = json!({ "a": self.pair.a(), "b": self.pair.b(), "v": self.gap });
        for (name, m) in self.means {
            v[name] = json!(m);
        }
        if let Some((t, s, q)) = self.q {
            v["t"] = json!(t);
            v["s"] = json!(s);
            v["Q"] = json!(q);
        }
        v
    }
}

pub struct Thresholds {
    set: ThresholdSet,
    p_form: String,
    q_form: String,
}

pub fn thresholds(s: f64) -> Result<Thresholds> {
    let set = sharp_thresholds(s)?;
    // the two integer exponents have tidy closed forms
    let (p_form, q_form) = if s == 1.0 {
        ("(1 - sqrt(1 - 4/e^2))/2".into(), "(3 - sqrt(3))/6".into())
    } else if s == 2.0 {
        ("(1 - sqrt(1 - 2/e))/2".into(), "(6 - sqrt(6))/12".into())
    } else {
        (
            format!("1/2 - sqrt(1 - (2/e)^(2/{s}))/2"),
            format!("1/2 - 1/(2 sqrt(3*{s}))"),
        )
    };
    Ok(Thresholds {
        set,
        p_form,
        q_form,
    })
}

impl Render for Thresholds {
    fn command(&self) -> &'static str {
        "thresholds"
    }

    fn human(&self) -> String {
        format!(
            "s = {}\np_s = {} = {}\nq_s = {} = {}\nQ_{{t,s}} < I for all pairs iff t <= p_s; I < Q_{{t,s}} iff t >= q_s\n",
            self.set.s, self.p_form, self.set.p, self.q_form, self.set.q
        )
    }

    fn csv(&self) -> Result<String> {
        csv_string(&["s", "p", "q", "p_closed_form", "q_closed_form"], |w| {
            w.write_record([
                sci(self.set.s),
                sci(self.set.p),
                sci(self.set.q),
                self.p_form.clone(),
                self.q_form.clone(),
            ])?;
            Ok(())
        })
    }

    fn structured(&self) -> Value {
        json!({
            "s": self.set.s,
            "p": self.set.p,
            "q": self.set.q,
            "p_closed_form": self.p_form,
            "q_closed_form": self.q_form,
        })
    }
}

/// Builds the check up front so bad parameters fail before any sampling.
pub fn verify_check(
    registry: &CheckRegistry,
    name: &str,
    args: &CheckArgs,
    grid: &GridSpec,
) -> Result<Verification> {
    let check = registry.build(name, args)?;
    grid.validate()?;
    Ok(Verification(verify(check.as_ref(), grid)?))
}

pub struct Verification(pub VerificationReport);

fn witness_lines(out: &mut String, w: &Witness) {
    let _ = writeln!(
        out,
        "witness: x = {}, (a, b) = ({}, {}), margin = {:e} (extended {:e})",
        num(w.x),
        num(w.a),
        num(w.b),
        w.margin_working,
        w.margin_extended
    );
}

impl Render for Verification {
    fn command(&self) -> &'static str {
        "verify"
    }

    fn human(&self) -> String {
        let r = &self.0;
        let params: Vec<String> = r
            .parameters
            .iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        let mut out = format!(
            "check: {} ({})\nverdict: {}\nworst margin: {:e} at x = {}\n",
            r.check,
            params.join(", "),
            r.verdict,
            r.worst_margin,
            num(r.worst_x)
        );
        if let Some(w) = &r.witness {
            witness_lines(&mut out, w);
        }
        let _ = writeln!(
            out,
            "grid: {} points, {}, [{}, {}]; {} rechecked in double-double",
            r.samples,
            match r.grid.spacing {
                Spacing::Uniform => "uniform",
                Spacing::EndpointRefined => "endpoint-refined",
            },
            num(r.grid.x_min),
            num(r.grid.x_max),
            r.rechecked
        );
        out
    }

    fn csv(&self) -> Result<String> {
        let r = &self.0;
        csv_string(
            &[
                "check",
                "verdict",
                "worst_margin",
                "worst_x",
                "witness_x",
                "witness_margin_extended",
                "samples",
                "rechecked",
            ],
            |w| {
                w.write_record([
                    r.check.clone(),
                    r.verdict.to_string(),
                    sci(r.worst_margin),
                    sci(r.worst_x),
                    opt_sci(r.witness.map(|w| w.x)),
                    opt_sci(r.witness.map(|w| w.margin_extended)),
                    r.samples.to_string(),
                    r.rechecked.to_string(),
                ])?;
                Ok(())
            },
        )
    }

    fn structured(&self) -> Value {
        serde_json::to_value(&self.0).unwrap_or(Value::Null)
    }
}

pub struct Falsification {
    t: f64,
    s: f64,
    side: Side,
    witness: Witness,
}

pub fn falsify_family(t: f64, s: f64, side: Side) -> Result<Falsification> {
    Ok(Falsification {
        t,
        s,
        side,
        witness: falsify(t, s, side)?,
    })
}

impl Render for Falsification {
    fn command(&self) -> &'static str {
        "falsify"
    }

    fn human(&self) -> String {
        let mut out = format!(
            "family, {} side, t = {}, s = {}: counterexample found\n",
            self.side, self.t, self.s
        );
        witness_lines(&mut out, &self.witness);
        out
    }

    fn csv(&self) -> Result<String> {
        csv_string(
            &[
                "t",
                "s",
                "side",
                "x",
                "a",
                "b",
                "margin_working",
                "margin_extended",
            ],
            |w| {
                let wt = &self.witness;
                w.write_record([
                    sci(self.t),
                    sci(self.s),
                    self.side.to_string(),
                    sci(wt.x),
                    sci(wt.a),
                    sci(wt.b),
                    sci(wt.margin_working),
                    sci(wt.margin_extended),
                ])?;
                Ok(())
            },
        )
    }

    fn structured(&self) -> Value {
        json!({
            "t": self.t,
            "s": self.s,
            "side": self.side,
            "witness": self.witness,
        })
    }
}

/// Inclusive arithmetic range `start:end:step`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Range {
    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{p}` is not a number"))
        };
        let r = match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Range {
                    start: v,
                    end: v,
                    step: 1.0,
                }
            }
            [a, b, step] => Range {
                start: num(a)?,
                end: num(b)?,
                step: num(step)?,
            },
            _ => {
                return Err(format!(
                    "expected `start:end:step` or a single value, got `{text}`"
                ))
            }
        };
        if !(r.start.is_finite() && r.end.is_finite() && r.step.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if r.step <= 0.0 || r.end < r.start {
            return Err(format!("need start <= end and step > 0, got `{text}`"));
        }
        if r.len() > 100_000 {
            return Err(format!("range `{text}` has more than 100000 values"));
        }
        Ok(r)
    }

    /// Both ends are included; the count is rounded so that float drift in
    /// `(end - start) / step` cannot drop the last value.
    pub fn len(&self) -> usize {
        ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.start + self.step * i as f64)
    }
}

pub struct SweepRow {
    s: f64,
    set: ThresholdSet,
    p_empirical: f64,
    q_empirical: f64,
    lower_margin_at_p: f64,
    upper_margin_at_q: f64,
}

pub struct Sweep {
    rows: Vec<SweepRow>,
    grid: GridSpec,
    tol: f64,
}

pub fn sweep(range: Range, grid: &GridSpec, tol: f64) -> Result<Sweep> {
    grid.validate()?;
    // every s is checked before the first (slow) threshold search
    let sets = range
        .values()
        .map(sharp_thresholds)
        .collect::<identric_core::Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(sets.len());
    for set in sets {
        let s = set.s;
        let lower = verify(&FamilyCheck::new(set.p, s, Side::Lower)?, grid)?;
        let upper = verify(&FamilyCheck::new(set.q, s, Side::Upper)?, grid)?;
        rows.push(SweepRow {
            s,
            set,
            p_empirical: empirical_threshold(s, Side::Lower, grid, tol)?,
            q_empirical: empirical_threshold(s, Side::Upper, grid, tol)?,
            lower_margin_at_p: lower.worst_margin,
            upper_margin_at_q: upper.worst_margin,
        });
    }
    Ok(Sweep {
        rows,
        grid: *grid,
        tol,
    })
}

pub const SWEEP_HEADER: [&str; 7] = [
    "s",
    "p_closed",
    "q_closed",
    "p_empirical",
    "q_empirical",
    "lower_margin_at_p",
    "upper_margin_at_q",
];

impl Sweep {
    /// A margin at the threshold below zero would mean the threshold fails.
    pub fn all_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.lower_margin_at_p >= 0.0 && r.upper_margin_at_q >= 0.0)
    }
}

impl Render for Sweep {
    fn command(&self) -> &'static str {
        "sweep"
    }

    fn human(&self) -> String {
        let mut out = format!(
            "{:>8} {:>20} {:>20} {:>20} {:>20} {:>12} {:>12}\n",
            "s", "p_s", "q_s", "p_s (grid)", "q_s (grid)", "margin@p", "margin@q"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>8} {:>20.17} {:>20.17} {:>20.17} {:>20.17} {:>12.3e} {:>12.3e}",
                r.s,
                r.set.p,
                r.set.q,
                r.p_empirical,
                r.q_empirical,
                r.lower_margin_at_p,
                r.upper_margin_at_q
            );
        }
        out
    }

    fn csv(&self) -> Result<String> {
        csv_string(&SWEEP_HEADER, |w| {
            for r in &self.rows {
                w.write_record([
                    sci(r.s),
                    sci(r.set.p),
                    sci(r.set.q),
                    sci(r.p_empirical),
                    sci(r.q_empirical),
                    sci(r.lower_margin_at_p),
                    sci(r.upper_margin_at_q),
                ])?;
            }
            Ok(())
        })
    }

    fn structured(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "s": r.s,
                    "p_closed": r.set.p,
                    "q_closed": r.set.q,
                    "p_empirical": r.p_empirical,
                    "q_empirical": r.q_empirical,
                    "lower_margin_at_p": r.lower_margin_at_p,
                    "upper_margin_at_q": r.upper_margin_at_q,
                })
            })
            .collect();
        json!({ "grid": self.grid, "tol": self.tol, "rows": rows })
    }
}

pub struct Certification {
    t: f64,
    s: f64,
    side: Side,
    membership: Membership,
    certificate: Certificate,
}

/// The lower inequality is `f < 0` on the interval, the upper one `f > 0`.
pub fn certify(
    t: f64,
    s: f64,
    side: Side,
    lo: f64,
    hi: f64,
    budget: usize,
) -> Result<Certification> {
    let sign = match side {
        Side::Lower => Sign::Negative,
        Side::Upper => Sign::Positive,
    };
    Ok(Certification {
        t,
        s,
        side,
        membership: membership(t, s)?,
        certificate: certify_sign(t, s, lo, hi, sign, budget)?,
    })
}

impl Certification {
    pub fn proved(&self) -> bool {
        self.certificate.proved
    }

    fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut c = BTreeMap::new();
        for leaf in self.certificate.leaves() {
            let key = match leaf.status {
                NodeStatus::ProvedNegative => "proved_negative",
                NodeStatus::ProvedPositive => "proved_positive",
                NodeStatus::Inconclusive => "inconclusive",
                NodeStatus::Split => continue,
            };
            *c.entry(key).or_default() += 1;
        }
        c
    }
}

impl Render for Certification {
    fn command(&self) -> &'static str {
        "certify"
    }

    fn human(&self) -> String {
        let nodes = &self.certificate.nodes;
        let (lo, hi) = (nodes[0].lo, nodes[0].hi);
        let counts: Vec<String> = self
            .counts()
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect();
        format!(
            "family, {} side, t = {}, s = {} ({:?}) on [{lo}, {hi}]\n{}\nnodes: {}; leaves {}\n",
            self.side,
            self.t,
            self.s,
            self.membership,
            if self.proved() {
                "proved"
            } else {
                "not proved"
            },
            nodes.len(),
            counts.join(", ")
        )
    }

    fn csv(&self) -> Result<String> {
        csv_string(
            &["lo", "hi", "bound_lo", "bound_hi", "status", "depth"],
            |w| {
                for n in self.certificate.leaves() {
                    let status = serde_json::to_value(n.status)?;
                    w.write_record([
                        sci(n.lo),
                        sci(n.hi),
                        sci(n.bound.lo),
                        sci(n.bound.hi),
                        status.as_str().unwrap_or_default().to_string(),
                        n.depth.to_string(),
                    ])?;
                }
                Ok(())
            },
        )
    }

    fn structured(&self) -> Value {
        json!({
            "t": self.t,
            "s": self.s,
            "side": self.side,
            "membership": self.membership,
            "certificate": self.certificate,
        })
    }
}

pub struct CheckList(pub Vec<(String, String)>);

impl Render for CheckList {
    fn command(&self) -> &'static str {
        "checks"
    }

    fn human(&self) -> String {
        self.0
            .iter()
            .map(|(n, s)| format!("{n:<14} {s}\n"))
            .collect()
    }

    fn csv(&self) -> Result<String> {
        csv_string(&["name", "summary"], |w| {
            for (n, s) in &self.0 {
                w.write_record([n, s])?;
            }
            Ok(())
        })
    }

    fn structured(&self) -> Value {
        self.0
            .iter()
            .map(|(n, s)| json!({ "name": n, "summary": s }))
            .collect()
    }
}
