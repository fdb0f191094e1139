//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use bottlab_core::degree::{certify_generator, column_degrees, degree_mc, degree_preimage, DEFAULT_H};
use bottlab_core::maps::{column, eta_cross, eta_n, pointwise_product, zeta, SphereMap};
use bottlab_core::sphere::sample_point;
use bottlab_core::table::FIXTURE;
use bottlab_core::{run_suite, DegreeConfig, RunConfig, Status};

type Outcome = Result<String, String>;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bottlab"))
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{out}; took {took:.1?}, limit {limit:?}"));
    }
    Ok(format!("{out}; {took:.1?}"))
}

/// Runs `suite/check` entries with the given sample count and tolerance.
fn pointwise(checks: &[(&str, usize, f64)]) -> Outcome {
    let mut notes = Vec::new();
    for &(path, samples, tol) in checks {
        let mut cfg = RunConfig {
            samples: Some(samples),
            ..RunConfig::default()
        };
        cfg.tolerances.insert(path.to_string(), tol);
        let report = run_suite(path, &cfg).map_err(|e| format!("{path}: {e}"))?;
        let c = &report.checks[0];
        let res = c.max_residual.unwrap_or(f64::INFINITY);
        if c.status != Status::Pass || !(res < tol) {
            return Err(format!("{path}: {} residual {res:.2e} vs {tol:e}: {}", c.status, c.details));
        }
        notes.push(format!("{path} {res:.1e}"));
    }
    Ok(notes.join(", "))
}

fn degrees_of(theta: &bottlab_core::UnitarySphereMap, samples: usize, seed: u64) -> Result<Vec<i64>, String> {
    let cols = column_degrees(theta, &DegreeConfig::new(samples, seed)).map_err(|e| e.to_string())?;
    if let Some(c) = cols.iter().find(|c| !c.certified) {
        return Err(format!("{}: uncertified column {:.4} ± {:.4}", theta.name(), c.raw, c.stderr));
    }
    Ok(cols.iter().map(|c| c.rounded).collect())
}

fn c1_eta_degree_two() -> Outcome {
    timed(Duration::from_secs(120), || {
        let cols = column_degrees(&eta_cross(), &DegreeConfig::new(4_000_000, 1)).map_err(|e| e.to_string())?;
        for (j, c) in cols.iter().enumerate() {
            if !c.certified || (c.raw - 2.0).abs() >= 0.05 {
                return Err(format!("column {}: {:.4} ± {:.4}", j + 1, c.raw, c.stderr));
            }
        }
        let raws: Vec<String> = cols.iter().map(|c| format!("{:.4}", c.raw)).collect();
        Ok(format!("raw [{}]", raws.join(", ")))
    })
}

fn c2_factorial_degrees() -> Outcome {
    let z = certify_generator(&zeta(2), &DegreeConfig::new(100_000, 2)).map_err(|e| e.to_string())?;
    if z.status != Status::Pass || z.columns.iter().any(|c| c.rounded.abs() != 1) {
        return Err(format!("ζ₂: {} {}", z.status, z.detail));
    }
    timed(Duration::from_secs(15 * 60), || {
        let eta4 = eta_n(4).map_err(|e| e.to_string())?;
        let r = certify_generator(&eta4, &DegreeConfig::new(20_000_000, 3)).map_err(|e| e.to_string())?;
        let first = r.columns[0].rounded;
        if r.status != Status::Pass || first.abs() != 6 || r.columns.iter().any(|c| c.rounded != first) {
            return Err(format!("η₄: {} {}", r.status, r.detail));
        }
        Ok(format!("ζ₂ ±1, η₄ {first} on all columns"))
    })
}

fn c3_psi_product() -> Outcome {
    timed(Duration::from_secs(30), || pointwise(&[("phi-psi/psi_product", 10_000, 1e-10)]))
}

fn c11_degree_homomorphism() -> Outcome {
    let eta = eta_cross();
    let sq = pointwise_product(&eta, &eta).map_err(|e| e.to_string())?;
    let d = degrees_of(&sq, 1_000_000, 4)?;
    if d.iter().any(|&k| k != 4) {
        return Err(format!("η·η column degrees {d:?}"));
    }
    let d = degrees_of(&bottlab_core::maps::cartan_cp2(), 1_000_000, 5)?;
    if d.iter().any(|&k| k != 0) {
        return Err(format!("Cartan column degrees {d:?}"));
    }
    for k in 1..=3usize {
        let e = degree_mc(&SphereMap::complex_conjugation(k), 100_000, 6, DEFAULT_H).map_err(|e| e.to_string())?;
        let want = if k % 2 == 0 { 1 } else { -1 };
        if !e.certified || e.rounded != want {
            return Err(format!("conjugation k = {k}: {:.4} ± {:.4}", e.raw, e.stderr));
        }
    }
    Ok("η·η → 4, Cartan → 0, conjugation → (−1)^k".into())
}

fn c12_oracle_agreement() -> Outcome {
    let eta = eta_cross();
    let mut maps = vec![
        SphereMap::identity(2),
        SphereMap::identity(5),
        SphereMap::antipodal(2),
        SphereMap::antipodal(3),
    ];
    maps.extend((1..=3).map(SphereMap::complex_conjugation));
    for j in 1..=3 {
        maps.push(column(&eta, j).map_err(|e| e.to_string())?);
    }
    let mut seen = Vec::new();
    for (i, f) in maps.iter().enumerate() {
        let seed = 100 + i as u64;
        let mc = degree_mc(f, 200_000, seed, DEFAULT_H).map_err(|e| format!("{}: {e}", f.name()))?;
        let target = sample_point(f.domain_dim(), seed ^ 0x7a11, 0);
        let pre = degree_preimage(f, &target, 400, seed, 1e-12).map_err(|e| format!("{}: {e}", f.name()))?;
        if !mc.certified || mc.rounded != pre.degree {
            return Err(format!("{}: Monte Carlo {:.4} vs preimages {}", f.name(), mc.raw, pre.degree));
        }
        seen.push(format!("{}={}", f.name(), pre.degree));
    }
    Ok(seen.join(" "))
}

fn c13_table() -> Outcome {
    let out = bin().args(["table", "--format", "data"]).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}", out.status.code()));
    }
    let on_disk = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/table1.tsv"))
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    if text != FIXTURE || text != on_disk {
        return Err("table output differs from the fixture".into());
    }
    Ok(format!("{} entries", text.lines().count() - 1))
}

fn c14_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("bottlab-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let run = |threads: &str| -> Result<Vec<u8>, String> {
        let path: PathBuf = dir.join(format!("t{threads}.json"));
        let out = bin()
            .args(["verify", "degrees", "--samples", "20000", "--seed", "9", "--threads", threads, "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.code() == Some(64) {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let (a, b) = (run("1")?, run("2")?);
    let _ = std::fs::remove_dir_all(&dir);
    if a != b {
        return Err("reports differ between 1 and 2 threads".into());
    }
    Ok(format!("{} identical bytes", a.len()))
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("eta_cross columns certify degree 2", Box::new(c1_eta_degree_two)),
        ("generator degrees are (n−1)!", Box::new(c2_factorial_degrees)),
        ("ψ-product is the identity", Box::new(c3_psi_product)),
        (
            "ψ-homotopy endpoints",
            Box::new(|| pointwise(&[("phi-psi/psi_homotopy_endpoints", 10_000, 1e-12)])),
        ),
        (
            "η·η̄ is the Cartan embedding",
            Box::new(|| pointwise(&[("eta-cross/cartan", 10_000, 1e-12)])),
        ),
        (
            "Lundell pipeline",
            Box::new(|| pointwise(&[("stable/lundell_eta3", 10_000, 1e-12), ("stable/eta3_to_eta", 10_000, 1e-12)])),
        ),
        (
            "Bott base case",
            Box::new(|| pointwise(&[("stable/bott_base", 10_000, 1e-12)])),
        ),
        (
            "symplectic closed forms",
            Box::new(|| {
                pointwise(&[
                    ("symplectic/phi12_closed_form", 1_000, 1e-11),
                    ("symplectic/phi2_corner", 10_000, 1e-12),
                    ("symplectic/phi2_reduction", 10_000, 1e-10),
                    ("symplectic/m1_constant", 10_000, 1e-12),
                ])
            }),
        ),
        (
            "symmetric maps give Sp-valued maps",
            Box::new(|| pointwise(&[("conjugation-symmetry/sp_candidate", 10_000, 1e-10)])),
        ),
        (
            "ζ_k commutes with conjugation",
            Box::new(|| pointwise(&[("conjugation-symmetry/zeta_conjugation", 10_000, 1e-12)])),
        ),
        ("degree is additive and kills the Cartan map", Box::new(c11_degree_homomorphism)),
        ("preimage oracle agrees with Monte Carlo", Box::new(c12_oracle_agreement)),
        ("homotopy table matches the fixture", Box::new(c13_table)),
        ("reports are thread-count independent", Box::new(c14_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(note) => println!("PASS {:>2} {name}: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
