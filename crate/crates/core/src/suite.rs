//! The equivalence checks behind `theorems`: one row per instance, one
//! pass/fail cell per check.

use std::fmt::Display;

use crate::document::Structure;
use crate::envelope::EnvelopeOptions;
use crate::fibration::{
    bitorsor_to_fibration_with, canonical_roundtrip_iso, components_from_a, components_from_b, conjugation_samples,
    decode_two_cell, encode_two_cell, fibration_to_bitorsor, FibrationOverI,
};
use crate::pregroupoid::Pregroupoid;
use crate::report::ValidationReport;
use crate::torsor::{
    ad, ad_right, c_left, c_right, cyclic_identity, env_to_bitorsor_with, forget_left, forget_right, left_torsor_iso,
    right_torsor_iso, roundtrip_iso_left, roundtrip_iso_right, square_commutes, Bitorsor, LeftTorsor, RightTorsor,
};

pub const COLUMNS: [&str; 7] = [
    "square",
    "cyclic",
    "iso-left",
    "iso-right",
    "ad-ad",
    "fibration",
    "two-cell",
];

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub strict: bool,
    /// Conjugation cells per instance, besides the identity cell.
    pub two_cell_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            strict: true,
            two_cell_samples: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteRow {
    pub name: String,
    /// In [`COLUMNS`] order; `Err` carries the first witness.
    pub cells: Vec<Result<(), String>>,
}

impl SuiteRow {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(Result::is_ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &str)> {
        COLUMNS
            .iter()
            .zip(&self.cells)
            .filter_map(|(c, r)| r.as_ref().err().map(|e| (*c, e.as_str())))
    }
}

type Check<T> = Result<T, String>;

fn text<E: Display>(e: E) -> String {
    e.to_string().trim_end().replace('\n', "; ")
}

fn clean(r: ValidationReport) -> Check<()> {
    match r.first() {
        None => Ok(()),
        Some(v) => Err(format!("{v}")),
    }
}

/// Every structure derived from the input, each possibly unavailable.
struct Subject {
    p: Check<Pregroupoid>,
    bi: Check<Bitorsor>,
    left: Check<LeftTorsor>,
    right: Check<RightTorsor>,
    fib: Check<FibrationOverI>,
}

impl Subject {
    fn derive(p: Check<Pregroupoid>, bi: Check<Bitorsor>, options: EnvelopeOptions) -> Subject {
        let left = bi.as_ref().map(forget_right).map_err(Clone::clone);
        let right = bi.as_ref().map(forget_left).map_err(Clone::clone);
        let fib = bi
            .clone()
            .and_then(|bi| bitorsor_to_fibration_with(&bi, options).map_err(text));
        Subject {
            p,
            bi,
            left,
            right,
            fib,
        }
    }

    fn new(s: &Structure, options: EnvelopeOptions) -> Result<Subject, String> {
        let envelope = |p: &Check<Pregroupoid>| p.clone().and_then(|p| env_to_bitorsor_with(&p, options).map_err(text));
        Ok(match s {
            Structure::Pregroupoid(p) => {
                let p = clean(p.validate()).map(|()| p.clone());
                let bi = envelope(&p);
                Subject::derive(p, bi, options)
            }
            Structure::LeftTorsor(t) => {
                let valid = clean(t.validate()).map(|()| t.clone());
                let p = valid.clone().and_then(|t| c_left(&t).map_err(text));
                let bi = envelope(&p);
                Subject {
                    left: valid,
                    ..Subject::derive(p, bi, options)
                }
            }
            Structure::RightTorsor(t) => {
                let valid = clean(t.validate()).map(|()| t.clone());
                let p = valid.clone().and_then(|t| c_right(&t).map_err(text));
                let bi = envelope(&p);
                Subject {
                    right: valid,
                    ..Subject::derive(p, bi, options)
                }
            }
            Structure::Bitorsor(b) => {
                let bi = clean(b.validate()).map(|()| b.clone());
                let p = bi.clone().and_then(|b| c_left(&forget_right(&b)).map_err(text));
                Subject::derive(p, bi, options)
            }
            Structure::Fibration(f) => {
                let fib = clean(f.validate()).map(|()| f.clone());
                let bi = fib.clone().and_then(|f| fibration_to_bitorsor(&f).map_err(text));
                let p = bi.clone().and_then(|b| c_left(&forget_right(&b)).map_err(text));
                Subject {
                    fib,
                    ..Subject::derive(p, bi, options)
                }
            }
            Structure::Groupoid(_) => return Err("a bare groupoid has no theorem suite; use a fibration".into()),
        })
    }
}

fn ad_ad(left: &LeftTorsor, right: &RightTorsor) -> Check<()> {
    let back = ad_right(&ad(left).map_err(text)?).map_err(text)?;
    left_torsor_iso(&back, left).map_err(text)?;
    let back = ad(&ad_right(right).map_err(text)?).map_err(text)?;
    right_torsor_iso(&back, right).map_err(text)?;
    Ok(())
}

fn fibration_roundtrip(f: &FibrationOverI) -> Check<()> {
    canonical_roundtrip_iso(f).map_err(text)?;
    let (a, b) = f.end_inclusion_properties().map_err(text)?;
    for (end, props) in [("A", a), ("B", b)] {
        if !props.is_equivalence() {
            return Err(format!("{end}-end inclusion is not an equivalence: {props:?}"));
        }
    }
    clean(fibration_to_bitorsor(f).map_err(text)?.validate())
}

fn two_cells(f: &FibrationOverI, samples: usize) -> Check<()> {
    for (i, cell) in conjugation_samples(f, samples).iter().enumerate() {
        let enc = encode_two_cell(cell);
        clean(enc.validate()).map_err(|e| format!("cell {i}: {e}"))?;
        let back = decode_two_cell(&enc).map_err(|e| format!("cell {i}: {}", text(e)))?;
        if &back != cell {
            return Err(format!("cell {i}: decoding does not return the cell"));
        }
        let on = |objs: Vec<usize>| objs.iter().map(|&o| cell.components()[o]).collect::<Vec<_>>();
        let from_a = components_from_a(cell.from(), cell.to(), &on(f.a_objects())).map_err(text)?;
        let from_b = components_from_b(cell.from(), cell.to(), &on(f.b_objects())).map_err(text)?;
        if from_a != cell.components() || from_b != cell.components() {
            return Err(format!("cell {i}: components are not forced by one end"));
        }
    }
    Ok(())
}

/// Runs every check on `s`. Fails only for kinds without a suite.
pub fn run_structure(name: &str, s: &Structure, options: SuiteOptions) -> Result<SuiteRow, String> {
    let envelope = EnvelopeOptions { strict: options.strict };
    let sub = Subject::new(s, envelope)?;
    let cells = vec![
        sub.bi
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|b| square_commutes(b).map_err(text)),
        sub.p
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|p| cyclic_identity(p).map_err(text)),
        sub.left
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|t| roundtrip_iso_left(t).map(drop).map_err(text)),
        sub.right
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|t| roundtrip_iso_right(t).map(drop).map_err(text)),
        match (&sub.left, &sub.right) {
            (Ok(l), Ok(r)) => ad_ad(l, r),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        },
        sub.fib.as_ref().map_err(Clone::clone).and_then(fibration_roundtrip),
        sub.fib
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|f| two_cells(f, options.two_cell_samples)),
    ];
    Ok(SuiteRow {
        name: name.to_string(),
        cells,
    })
}

/// Rows for many instances, computed on all available cores and returned
/// in input order.
pub fn run_all(items: &[(String, Structure)], options: SuiteOptions) -> Result<Vec<SuiteRow>, String> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|(n, s)| run_structure(n, s, options))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        let mut rows = Vec::with_capacity(items.len());
        for h in handles {
            rows.extend(h.join().expect("suite worker panicked")?);
        }
        Ok(rows)
    })
}

/// The pass/fail matrix, failure witnesses and a closing tally.
pub fn render(rows: &[SuiteRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.name.len())
        .chain(["instance".len()])
        .max()
        .unwrap_or(8);
    let mut out = format!("{:width$}", "instance");
    for c in COLUMNS {
        out.push_str(&format!("  {c}"));
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{:width$}", r.name));
        for (c, cell) in COLUMNS.iter().zip(&r.cells) {
            out.push_str(&format!(
                "  {:w$}",
                if cell.is_ok() { "pass" } else { "FAIL" },
                w = c.len()
            ));
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
    }
    for r in rows {
        for (c, why) in r.failures() {
            out.push_str(&format!("failure {} {c}: {why}\n", r.name));
        }
    }
    let failed = rows.iter().filter(|r| !r.passed()).count();
    out.push_str(&format!("{} instances, {} failed\n", rows.len(), failed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bijection_pregroup_n, group_regular_torsor, terminal_pregroupoid};
    use crate::set::Table3;

    #[test]
    fn terminal_row_passes() {
        let row = run_structure(
            "terminal",
            &Structure::Pregroupoid(terminal_pregroupoid()),
            SuiteOptions::default(),
        )
        .unwrap();
        assert!(row.passed(), "{row:?}");
    }

    #[test]
    fn bijection_and_torsor_rows_pass() {
        let items = vec![
            (
                "b3".to_string(),
                Structure::Pregroupoid(bijection_pregroup_n(3).unwrap()),
            ),
            (
                "g4".to_string(),
                Structure::LeftTorsor(group_regular_torsor(4).unwrap()),
            ),
        ];
        let rows = run_all(&items, SuiteOptions::default()).unwrap();
        assert!(rows.iter().all(SuiteRow::passed), "{rows:?}");
        let text = render(&rows);
        assert!(text.ends_with("2 instances, 0 failed\n"));
    }

    #[test]
    fn corrupted_table_fails_its_row() {
        let p = bijection_pregroup_n(2).unwrap();
        let mut t: Table3 = p.table().clone();
        let v = t.get(0, 0, 0).unwrap();
        t.set(0, 0, 0, Some(1 - v));
        let bad = Pregroupoid::new(
            p.carrier().clone(),
            p.a().clone(),
            p.b().clone(),
            p.alpha_map().to_vec(),
            p.beta_map().to_vec(),
            t,
        )
        .unwrap();
        let row = run_structure("bad", &Structure::Pregroupoid(bad), SuiteOptions::default()).unwrap();
        assert!(!row.passed());
        assert!(render(&[row]).contains("failure bad cyclic"));
    }
}
