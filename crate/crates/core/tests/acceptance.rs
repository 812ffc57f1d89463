//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. All comparisons are exact; the time limits are
//! wall-clock bounds on the listed work.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use divide_forge::census::{
    chain_divide, enumerate_divides, enumerate_genus_one, family, ribbon_boundary_profile,
    CensusEntry, FamilyKind, GluingKind, DEFAULT_MAX_V,
};
use divide_forge::divide::Divide;
use divide_forge::fiber::{build_fiber, monodromy_word};
use divide_forge::homology::{homological_monodromy, IntMatrix};
use divide_forge::invariants::{heegaard_check, page_invariants};

type Check = Result<String, String>;

fn limit(name: &str, elapsed: Duration, max: Duration) -> Result<(), String> {
    if elapsed <= max {
        Ok(())
    } else {
        Err(format!("{name} took {elapsed:.2?}, limit {max:?}"))
    }
}

fn page_formulas() -> Check {
    let start = Instant::now();
    for g in 1..=5u32 {
        for (kind, binding) in [
            (FamilyKind::BirkhoffFried, 4 * g + 4),
            (FamilyKind::Brunella, 4 * g + 2),
            (FamilyKind::Minimal, 4 * g),
        ] {
            let p = family(kind, g).map_err(|e| e.to_string())?;
            let inv = page_invariants(&p).map_err(|e| e.to_string())?;
            if inv.genus != 1 || inv.binding_components != binding || inv.ambient_genus != g {
                return Err(format!(
                    "{kind} g={g}: h={} k={} surface genus {}, expected h=1 k={binding}",
                    inv.genus, inv.binding_components, inv.ambient_genus
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    limit("page formulas", elapsed, Duration::from_secs(1))?;
    Ok(format!("15 family divides, h=1 and k=4g+4/4g+2/4g, {elapsed:.2?}"))
}

fn genus_one_classification(census: &[CensusEntry], census_time: Duration) -> Check {
    let start = Instant::now();
    for g in 1..=4 {
        let entries = enumerate_genus_one(g).map_err(|e| e.to_string())?;
        if entries.len() != 3 {
            return Err(format!("g={g}: {} classes from chains", entries.len()));
        }
        let families: BTreeSet<_> = entries.iter().filter_map(|e| e.family).collect();
        if families.len() != 3 {
            return Err(format!("g={g}: chain classes are not the three families"));
        }
        if g <= 2 {
            let chains: BTreeSet<_> = entries.iter().map(|e| e.canonical.clone()).collect();
            let brute: BTreeSet<_> = census
                .iter()
                .filter(|e| {
                    e.invariants.circles == e.invariants.double_points
                        && e.invariants.double_points > 0
                        && e.invariants.ambient_genus == g
                })
                .map(|e| e.canonical.clone())
                .collect();
            if brute != chains {
                return Err(format!(
                    "g={g}: census finds {} classes with c=v, chains give {}",
                    brute.len(),
                    chains.len()
                ));
            }
        }
    }
    let elapsed = start.elapsed() + census_time;
    limit("classification", elapsed, Duration::from_secs(300))?;
    Ok(format!(
        "3 classes for g=1..4, census agrees for g=1..2, {elapsed:.2?} including census"
    ))
}

fn ribbon_profiles() -> Check {
    for k in 2..=9usize {
        for gluing in GluingKind::ALL {
            if gluing.even() != (k % 2 == 0) {
                continue;
            }
            let (profile, genus) = match gluing {
                GluingKind::EvenSelf => (vec![k; 4], (k - 2) / 2),
                GluingKind::EvenCross => (vec![2 * k; 2], k / 2),
                GluingKind::OddA | GluingKind::OddB => (vec![k, k, 2 * k], (k - 1) / 2),
            };
            let traced = ribbon_boundary_profile(k, gluing).map_err(|e| e.to_string())?;
            if traced != profile {
                return Err(format!("k={k} {gluing}: profile {traced:?}, expected {profile:?}"));
            }
            let p = chain_divide(k, gluing).map_err(|e| e.to_string())?;
            let g = p.ambient_genus().map_err(|e| e.to_string())? as usize;
            if g != genus {
                return Err(format!("k={k} {gluing}: genus {g}, expected {genus}"));
            }
        }
    }
    Ok("k=2..9, all gluings".to_string())
}

fn free_loop() -> Check {
    let p = Divide::free_loop();
    let inv = page_invariants(&p).map_err(|e| e.to_string())?;
    if (inv.binding_components, inv.euler_char, inv.genus) != (2, 0, 0) {
        return Err(format!("page {inv:?} is not an annulus"));
    }
    let coloring = p.checkerboard(false).map_err(|e| e.to_string())?;
    let fiber = build_fiber(&p, &coloring).map_err(|e| e.to_string())?;
    if (fiber.euler_characteristic(), fiber.boundary_cycles().len()) != (0, 2) {
        return Err("traced fiber is not an annulus".into());
    }
    let word = monodromy_word(&p).map_err(|e| e.to_string())?;
    let core = fiber.vanishing_cycles().alphas[0].cycle.clone();
    let squared = word.len() == 2 && word.twists.iter().all(|t| t.positive && t.cycle == core);
    if !squared {
        return Err(format!("word {word} is not the squared core twist"));
    }
    let (basis, m) = homological_monodromy(&fiber, &word).map_err(|e| e.to_string())?;
    if basis.rank() != 1 || m != IntMatrix::identity(1) {
        return Err("homological monodromy is not the identity on H_1 = Z".into());
    }
    Ok(format!("annulus, 2 binding components, word {word}"))
}

fn oracle_equivalence(census: &[CensusEntry], census_time: Duration) -> Check {
    let start = Instant::now();
    for e in census {
        let p = &e.divide;
        let coloring = p.checkerboard(false).map_err(|e| e.to_string())?;
        let fiber = build_fiber(p, &coloring).map_err(|e| e.to_string())?;
        let traced = (fiber.euler_characteristic(), fiber.boundary_cycles().len());
        let expected = (-2 * p.double_points() as i64, 2 * p.circle_count());
        if traced != expected {
            return Err(format!(
                "{:?}: traced {traced:?}, expected {expected:?}",
                p.map().rotations()
            ));
        }
    }
    let elapsed = start.elapsed() + census_time;
    limit("oracle equivalence", elapsed, Duration::from_secs(300))?;
    Ok(format!(
        "{} census divides with v <= {DEFAULT_MAX_V}, {elapsed:.2?} including census",
        census.len()
    ))
}

fn heegaard(census: &[CensusEntry]) -> Check {
    let mut tight = 0;
    for e in census {
        let (data, ok) = heegaard_check(&e.divide).map_err(|e| e.to_string())?;
        if !ok {
            return Err(format!(
                "{:?}: 2h+k-1 = {} < {}",
                e.divide.map().rotations(),
                data.heegaard_genus_from_openbook,
                data.heegaard_genus_lower_bound
            ));
        }
        if data.heegaard_genus_from_openbook == data.heegaard_genus_lower_bound {
            tight += 1;
        }
    }
    Ok(format!("{} census divides, {tight} with equality", census.len()))
}

fn monodromy(census: &[CensusEntry]) -> Check {
    let start = Instant::now();
    let mut largest = 0;
    for e in census {
        let p = &e.divide;
        let word = monodromy_word(p).map_err(|e| e.to_string())?;
        let chi = p.ambient_euler_characteristic().map_err(|e| e.to_string())?;
        if word.len() as i64 != chi + 2 * p.double_points() as i64 {
            return Err(format!("{:?}: word length {}", p.map().rotations(), word.len()));
        }
        let coloring = p.checkerboard(false).map_err(|e| e.to_string())?;
        let fiber = build_fiber(p, &coloring).map_err(|e| e.to_string())?;
        let (basis, m) = homological_monodromy(&fiber, &word).map_err(|e| e.to_string())?;
        if !m.preserves_form(basis.form()) {
            return Err(format!("{:?}: M^T J M != J", p.map().rotations()));
        }
        largest = largest.max(m.entries.iter().map(|x| x.abs()).max().unwrap_or(0));
    }
    Ok(format!(
        "{} census divides, largest matrix entry {largest}, {:.2?}",
        census.len(),
        start.elapsed()
    ))
}

fn canonicalization() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for kind in FamilyKind::ALL {
        for g in 1..=4 {
            let p = family(kind, g).map_err(|e| e.to_string())?;
            let form = p.canonical_form().map_err(|e| e.to_string())?;
            let mut perm: Vec<usize> = (0..p.map().dart_count()).collect();
            for _ in 0..100 {
                perm.shuffle(&mut rng);
                let q = p.relabel(&perm).map_err(|e| e.to_string())?;
                if q.canonical_form().map_err(|e| e.to_string())? != form {
                    return Err(format!("{kind} g={g}: relabeling changed the canonical form"));
                }
                checked += 1;
            }
        }
    }
    for k in (3..=9).step_by(2) {
        let a = chain_divide(k, GluingKind::OddA).map_err(|e| e.to_string())?;
        let b = chain_divide(k, GluingKind::OddB).map_err(|e| e.to_string())?;
        if a.canonical_form().map_err(|e| e.to_string())?
            != b.canonical_form().map_err(|e| e.to_string())?
        {
            return Err(format!("k={k}: odd gluings differ"));
        }
    }
    Ok(format!("{checked} relabelings, odd gluings collide for k=3..9"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let census = enumerate_divides(DEFAULT_MAX_V);
    let census_time = start.elapsed();
    let census_check = |f: &dyn Fn(&[CensusEntry]) -> Check| match &census {
        Ok(entries) => f(entries),
        Err(e) => Err(format!("census failed: {e}")),
    };

    let results: Vec<(&str, Check)> = vec![
        ("page invariants of the three families", page_formulas()),
        (
            "genus-one classification",
            census_check(&|c| genus_one_classification(c, census_time)),
        ),
        ("ribbon profiles and chain genus", ribbon_profiles()),
        ("free loop", free_loop()),
        (
            "fiber oracle on the census",
            census_check(&|c| oracle_equivalence(c, census_time)),
        ),
        ("Heegaard consistency", census_check(&heegaard)),
        ("monodromy word and symplectic action", census_check(&monodromy)),
        ("canonicalization robustness", canonicalization()),
    ];

    let mut failed = 0;
    for (i, (name, result)) in results.iter().enumerate() {
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {} {name}: {reason}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2?}",
        results.len() - failed,
        results.len(),
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
