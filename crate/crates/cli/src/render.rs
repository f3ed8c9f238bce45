//! Plain-text renderings of command results.

use std::fmt::Write;

use mfk_core::clifford::AbsRow;
use mfk_core::ktheory::{K0Class, MilnorK, PropWeReport};
use mfk_core::mf::HomCohomology;

pub fn k0_class(c: &K0Class, window: i64) -> String {
    let names = match c.coords.len() {
        1 => vec![format!("K^{}(L)", (c.n - 1) / 2)],
        _ => vec![format!("K^{}(X)", (c.n - 2) / 2), format!("K^{}(X')", (c.n - 2) / 2)],
    };
    let terms: Vec<String> = c.coords.iter().zip(&names).map(|(k, b)| format!("{k}*[{b}]")).collect();
    format!("q_{}: ({}) = {}  [window {window}]\n", c.n, join(&c.coords, ", "), terms.join(" + "))
}

pub fn euler(h: &HomCohomology) -> String {
    let mut s = String::new();
    for m in h.support() {
        let _ = writeln!(s, "H^{m} = {}", h.dim(m));
    }
    if h.is_certified() {
        let _ = writeln!(s, "euler pairing = {}  [window {}]", h.euler_characteristic(), h.window);
    } else {
        let _ = writeln!(s, "window {} not certified: cohomology reaches its ends", h.window);
    }
    s
}

pub fn pushforward(n: usize, rows: &[Vec<i64>]) -> String {
    let width = rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    let mut s = format!("i_* for n = {n} (rows [O(-{})] .. [O]):\n", n - 1);
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:>width$}")).collect();
        let _ = writeln!(s, "  [{}]", cells.join(" "));
    }
    s
}

pub fn abs_table(rows: &[AbsRow]) -> String {
    let mut s = String::from("n  M(C_n)  i_n^*        A_n\n");
    for r in rows {
        let m = if r.m_rank == 2 { "Z^2" } else { "Z" };
        let mat: Vec<String> = r.restriction.iter().map(|row| join(row, " ")).collect();
        let _ = writeln!(s, "{:<2} {:<7} {:<12} {}", r.n, m, format!("[{}]", mat.join("; ")), r.a_n);
    }
    s
}

pub fn prop_we(r: &PropWeReport) -> String {
    let verdict = if r.passed { "pass" } else { "FAIL" };
    format!(
        "{verdict}: a = {}, b = {}, koszul = {}, coker(alpha) = {}, quotient rank {}\n",
        r.a, r.b, r.koszul, r.coker_alpha, r.quotient_rank
    )
}

pub fn milnor(k: &MilnorK) -> String {
    let mut s = format!(
        "K^0(F) = {}, K^1(F) = {}\nK^0_rel = {}, K^1_rel = {}\n",
        k.fibre.0, k.fibre.1, k.krel0, k.krel1
    );
    for b in &k.bott_classes {
        let _ = writeln!(s, "bott class: {b}");
    }
    s
}

fn join(v: &[i64], sep: &str) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(sep)
}
