//! Report rows for the Pythagorean-triple search front end.

use serde::Serialize;

use ellsurf_core::pythagorean::{search_report, SearchRow};

#[derive(Serialize, Clone, Debug)]
pub struct TripleRow {
    pub p: i64,
    pub q: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub canonical: String,
    pub t: String,
    pub u: String,
    pub k: i64,
    pub q1: String,
    pub q2: String,
    pub degenerate: bool,
    pub q1_non_torsion: bool,
    pub q2_non_torsion: bool,
    pub rank_lower_bound: u32,
}

pub fn triples_rows(p_max: i64, q_max: i64) -> Vec<TripleRow> {
    let rows = search_report(1..=p_max, 1..=q_max);
    rows.iter().map(row_of).collect()
}

fn row_of(row: &SearchRow) -> TripleRow {
    let t = &row.membership.triple;
    let fmt_pt = |p: &ellsurf_core::weierstrass::Point<ellsurf_core::field::Rationals>| match p
        .xy()
    {
        None => "O".to_string(),
        Some((x, y)) => format!("({x}, {y})"),
    };
    TripleRow {
        p: row.p,
        q: row.q,
        a: t.a,
        b: t.b,
        c: t.c,
        canonical: format!(
            "({}, {}, {})",
            row.canonical.a, row.canonical.b, row.canonical.c
        ),
        t: row.t_param.to_string(),
        u: row.membership.u.to_string(),
        k: row.membership.k,
        q1: fmt_pt(&row.points.q1),
        q2: fmt_pt(&row.points.q2),
        degenerate: row.points.degenerate,
        q1_non_torsion: row.points.q1_non_torsion,
        q2_non_torsion: row.points.q2_non_torsion,
        rank_lower_bound: row.rank_lower_bound,
    }
}
