//! Browser bindings. Each export returns plain text for the page to drop into a
//! `<pre>`; errors come back as `Err(String)`, which wasm-bindgen throws as a JS
//! exception.

use std::fmt::Write as _;

use artin_bredon::abelian::{matrix::smith_diagonal, matrix_ker_coker, AbelianGroup, IntMatrix};
use artin_bredon::artin::{default_class_catalog, ArtinParameters};
use artin_bredon::engine::{compute, e2_page, render_text, CellValue, EngineConfig, HomologyReport};
use artin_bredon::ktheory::builtin;
use wasm_bindgen::prelude::wasm_bindgen;

fn report(ring: &str, n: i32, q_min: i32, q_max: i32, e2: bool) -> Result<HomologyReport, String> {
    if q_min > q_max {
        return Err(format!("empty range {q_min}..{q_max}"));
    }
    let profile = builtin(ring).map_err(|e| e.to_string())?;
    let params = ArtinParameters::new(n.into()).map_err(|e| e.to_string())?;
    let catalog = default_class_catalog(&params);
    let range = (q_min.into(), q_max.into());
    let config = EngineConfig::default();
    Ok(if e2 {
        e2_page(&profile, &params, range, &catalog, &config)
    } else {
        compute(&profile, &params, range, &catalog, &config)
    })
}

/// The E² page for a builtin ring.
#[wasm_bindgen]
pub fn e2_page_text(ring: &str, n: i32, q_min: i32, q_max: i32) -> Result<String, String> {
    report(ring, n, q_min, q_max, true).map(|r| render_text(&r))
}

/// Value of one cell and the steps that produced it.
#[wasm_bindgen]
pub fn cell_trail(ring: &str, n: i32, p: u32, q: i32) -> Result<String, String> {
    let r = report(ring, n, q, q, false)?;
    let cell = r
        .cell(p as usize, q.into())
        .ok_or_else(|| format!("H_{p} vanishes for p > 3"))?;
    let mut out = String::new();
    match &cell.value {
        CellValue::Group(v) => writeln!(out, "H_{p} = {v}").unwrap(),
        CellValue::Error(e) => writeln!(out, "H_{p}: {e}").unwrap(),
    }
    for step in &cell.trail {
        writeln!(out, "  {step}").unwrap();
    }
    for w in r.warnings() {
        writeln!(out, "note: {w}").unwrap();
    }
    Ok(out)
}

/// Rows separated by `;` or newlines, entries by spaces or commas.
fn parse_matrix(src: &str) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<i128>> = src
        .split([';', '\n'])
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            r.split([' ', ',', '\t'])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i128>().map_err(|_| format!("not an integer: `{t}`")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err("matrix rows must be nonempty and of equal length".into());
    }
    Ok(IntMatrix::from_rows(&rows))
}

/// Smith diagonal of `m`, and kernel and cokernel of `m ⊗ K`.
#[wasm_bindgen]
pub fn snf_explorer(matrix: &str, group: &str) -> Result<String, String> {
    let m = parse_matrix(matrix)?;
    let k: AbelianGroup = group.trim().parse().map_err(|e| format!("{e}"))?;
    let (ker, coker) = matrix_ker_coker(&m, &k).map_err(|e| e.to_string())?;
    let d: Vec<String> = smith_diagonal(&m).iter().map(i128::to_string).collect();
    Ok(format!(
        "M = {m}\nSmith diagonal: [{}]\nK = {k}\nker(M (x) K)   = {ker}\ncoker(M (x) K) = {coker}\n",
        d.join(", ")
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn page() {
        let t = e2_page_text("Z", 3, 0, 2).unwrap();
        assert!(t.starts_with("E^2_{p,q}"));
        assert!(e2_page_text("Q", 3, 0, 2).is_err());
        assert!(e2_page_text("Z", 3, 2, 0).is_err());
        // the ring menu of the page
        for ring in ["Z", "F2", "F3", "F4", "Z[C2]", "Z[C2xC2]", "Z[C4]"] {
            assert!(e2_page_text(ring, 4, 0, 1).is_ok(), "{ring}");
        }
    }

    #[test]
    fn trail() {
        let t = cell_trail("Z[C2]", 5, 0, 1).unwrap();
        assert!(t.starts_with("H_0 = (+)_{w} Z (+) (Z/2)^2\n"), "{t}");
        assert!(t.contains("coker g2^0"));
        assert!(cell_trail("Z", 3, 4, 0).is_err());
    }

    #[test]
    fn explorer() {
        let t = snf_explorer("2; 3", "Z/12").unwrap();
        assert!(t.contains("ker(M (x) K)   = 0\n"), "{t}");
        assert!(t.contains("coker(M (x) K) = Z/4 (+) Z/3"), "{t}");
        let t = snf_explorer("2 4\n6 0", "Z").unwrap();
        assert!(t.contains("Smith diagonal: [2, 12]"), "{t}");
        assert!(snf_explorer("1 2; 3", "Z").is_err());
        assert!(snf_explorer("x", "Z").is_err());
    }
}
