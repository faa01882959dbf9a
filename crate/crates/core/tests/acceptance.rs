//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use exforge::catalog::{self, Kind, JORDAN_COLUMNS, OCTONION_NAMES};
use exforge::classify::{
    cartan_subalgebra, root_decomposition, simplicity_certificate, table1, table2, CellReport, ComplexType,
    Table2Options,
};
use exforge::exactlin::{Mat, Rat};
use exforge::io;
use exforge::liealg::{verify_lie, JacobiMode, LieAlgebra};
use exforge::tits::{coefficient_system_rank, construct, induced_automorphism, TitsAlgebra, TitsCoefficients};

const GRID: [[&str; 11]; 2] = [
    ["f4c", "f4,1", "e6c", "e6(-14)", "e6(-26)", "e7c", "e7,4", "e7,3", "e8c", "e8s", "e8,4"],
    ["f4s", "f4s", "e6,4", "e6,4", "e6s", "e7,4", "e7,4", "e7s", "e8,4", "e8,4", "e8s"],
];

const JACOBI_SAMPLES: usize = 1_000_000;
const JACOBI_SEED: u64 = 2024;

type Outcome = (bool, String);
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn build(o: &str, j: &str) -> TitsAlgebra {
    construct(&catalog::octonion(o).unwrap(), &catalog::jordan(j).unwrap()).unwrap()
}

fn jacobi(l: &LieAlgebra) -> (bool, Duration) {
    let t = Instant::now();
    let mode =
        if l.dim() <= 78 { JacobiMode::Full } else { JacobiMode::Sample { n: JACOBI_SAMPLES, seed: JACOBI_SEED } };
    (verify_lie(l, mode).passed(), t.elapsed())
}

fn dimensions() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (j, want) in [("Jc1", 52), ("Jc2", 78), ("Jc4", 133), ("Jc8", 248)] {
        let t = Instant::now();
        let g = build("Oc", j);
        let dt = t.elapsed();
        ok &= g.dim() == want && dt <= Duration::from_secs(60);
        parts.push(format!("{}/{want} in {:.2}s", g.dim(), dt.as_secs_f64()));
    }
    (ok, parts.join(", "))
}

fn jacobi_identity() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for j in ["Jc1", "Jc2", "Jc4", "Jc8"] {
        let g = build("Os", j);
        let (pass, dt) = jacobi(&g.lie);
        let limit = if g.dim() <= 78 { 300 } else { u64::MAX };
        ok &= pass && dt <= Duration::from_secs(limit);
        let mode = if g.dim() <= 78 { "full".to_string() } else { format!("{JACOBI_SAMPLES} samples") };
        parts.push(format!("dim {} {mode} {} ({:.2}s)", g.dim(), if pass { "ok" } else { "FAIL" }, dt.as_secs_f64()));
    }
    (ok, parts.join(", "))
}

fn table2_labels(cells: &[CellReport], elapsed: Duration) -> Outcome {
    let mut bad = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        if c.label != GRID[i / 11][i % 11] {
            bad.push(format!("{} gave {} (expected {})", c.cell, c.label, GRID[i / 11][i % 11]));
        }
    }
    let ok = cells.len() == 22 && bad.is_empty() && elapsed <= Duration::from_secs(45 * 60);
    let detail =
        if bad.is_empty() { format!("22/22 cells match in {:.1}s", elapsed.as_secs_f64()) } else { bad.join("; ") };
    (ok, detail)
}

fn table1_rows() -> Outcome {
    let (rows, rep) = table1().unwrap();
    let dims: Vec<usize> = rows.iter().map(|r| r.dim).collect();
    let deltas: Vec<i64> = rows.iter().map(|r| r.delta).collect();
    let ok = rep.passed() && dims == [3, 8, 21, 52] && deltas == [1, 0, -5, -20];
    (ok, format!("dims {dims:?}, deltas {deltas:?}"))
}

fn cells_with(cells: &[CellReport], prefix: &str) -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for c in cells {
        let relevant: Vec<_> = c.checks.iter().filter(|k| k.name.starts_with(prefix) && !k.informational).collect();
        count += relevant.len();
        if relevant.is_empty() || relevant.iter().any(|k| !k.passed) {
            bad.push(c.cell.clone());
        }
    }
    let detail = if bad.is_empty() {
        format!("{count} checks over {} cells", cells.len())
    } else {
        format!("failing cells: {}", bad.join(", "))
    };
    (bad.is_empty(), detail)
}

fn coefficient_solver() -> Outcome {
    let expected = TitsCoefficients { mu1: Rat::new(1, 3), mu2: Rat::int(1), mu3: Rat::int(-2) };
    let jordans: Vec<String> =
        catalog::catalog().into_iter().filter(|e| e.kind == Kind::Jordan).map(|e| e.name).collect();
    let mut bad = Vec::new();
    let mut count = 0;
    for o in OCTONION_NAMES {
        let oa = catalog::octonion(o).unwrap();
        for j in &jordans {
            let ja = catalog::jordan(j).unwrap();
            count += 1;
            let rank = coefficient_system_rank(&oa, &ja).unwrap();
            let g = construct(&oa, &ja).unwrap();
            let (pass, _) = jacobi(&g.lie);
            if rank != 2 || !pass || g.coeffs != expected {
                bad.push(format!("{o}/{j} (rank {rank}, jacobi {pass})"));
            }
        }
    }
    let detail =
        if bad.is_empty() { format!("{count} pairs, rank 2, mu = (1/3, 1, -2), Jacobi ok") } else { bad.join("; ") };
    (bad.is_empty(), detail)
}

fn split_roots() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (o, j, ty) in [
        ("Os", "Jc1", ComplexType::F4),
        ("Os", "Js2", ComplexType::E6),
        ("Os", "Js4", ComplexType::E7),
        ("Os", "Js8", ComplexType::E8),
    ] {
        let t = Instant::now();
        let g = build(o, j);
        let h = cartan_subalgebra(&g.lie, 1).unwrap();
        let d = root_decomposition(&g.lie, &h);
        let pass = d.roots.len() == ty.root_count() && d.type_label == Some(ty);
        ok &= pass;
        parts.push(format!(
            "{o}/{j}: {} roots, type {} ({:.1}s)",
            d.roots.len(),
            d.type_name(),
            t.elapsed().as_secs_f64()
        ));
    }
    (ok, parts.join(", "))
}

fn outer_automorphism() -> Outcome {
    let g = build("Oc", "Jc2");
    let j = &g.jordan;
    let phi_j = j.coordinate_map(&j.coord.conj, &j.rho);
    let (tau, rep) = induced_automorphism(&g, &Mat::identity(8), &phi_j).unwrap();
    let n = g.dim();
    let involutive = tau.mul(&tau) == Mat::identity(n);
    let nontrivial = tau != Mat::identity(n);
    let ok = rep.passed() && involutive && nontrivial && j.coord.dim() == 2;
    (ok, format!("dim {n}, bracket preserving {}, involutive {involutive}, trace {}", rep.passed(), tau.trace()))
}

fn simplicity() -> Outcome {
    let mut bad = Vec::new();
    for o in OCTONION_NAMES {
        for j in JORDAN_COLUMNS {
            let g = build(o, j);
            if !simplicity_certificate(&g.lie, 11).passed() {
                bad.push(format!("{o}/{j}"));
            }
        }
    }
    let detail = if bad.is_empty() {
        "22 cells: centroid 1 (dim <= 80), ideal certificate + nondegenerate Killing form otherwise".into()
    } else {
        bad.join(", ")
    };
    (bad.is_empty(), detail)
}

fn round_trips() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for e in catalog::catalog() {
        let alg = match e.kind {
            Kind::Octonion => catalog::octonion(&e.name).unwrap().alg,
            Kind::Jordan => catalog::jordan(&e.name).unwrap().alg,
        };
        let text = io::alg_to_json(&alg);
        let back = io::alg_from_json(&text).unwrap();
        count += 1;
        if back != alg || io::alg_to_json(&back) != text {
            bad.push(e.name.clone());
        }
    }
    for o in OCTONION_NAMES {
        for j in JORDAN_COLUMNS {
            let g = build(o, j);
            let text = io::lie_to_json(&g.lie);
            let back = io::lie_from_json(&text).unwrap();
            count += 1;
            if back != g.lie || io::lie_to_json(&back) != text {
                bad.push(format!("{o}/{j}"));
            }
        }
    }
    (bad.is_empty(), if bad.is_empty() { format!("{count} algebras bit-identical") } else { bad.join(", ") })
}

fn main() {
    let t = Instant::now();
    let opts = Table2Options::default();
    let cells = table2(&opts).expect("real-form grid runs");
    let grid_time = t.elapsed();

    let criteria: Vec<Criterion> = vec![
        ("dimensions 52, 78, 133, 248", Box::new(dimensions)),
        ("Jacobi identity", Box::new(jacobi_identity)),
        ("real-form grid labels", Box::new(|| table2_labels(&cells, grid_time))),
        ("Der(JII(d)) dims and characters", Box::new(table1_rows)),
        ("dual pair in every cell", Box::new(|| cells_with(&cells, "dual pair"))),
        ("unique Tits coefficients", Box::new(coefficient_solver)),
        ("split root systems", Box::new(split_roots)),
        ("outer automorphism tau", Box::new(outer_automorphism)),
        ("simplicity", Box::new(simplicity)),
        ("Cartan involution trace", Box::new(|| cells_with(&cells, "Cartan involution"))),
        ("serialization round trip", Box::new(round_trips)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = f();
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
