use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bicat_core::bicat_data::{check_conditions, Alpha2};
use bicat_core::extended::{decompose, realize_with};
use bicat_core::format::{load_extended, load_group, load_structure, load_triple, write_structure};
use bicat_core::group::Group;
use bicat_core::maltsev::{
    check_p1, check_p_associativity_with, groupoid_from_triple, groupoid_iso_defect, p1_prime_witness,
    triple_from_groupoid,
};
use bicat_core::path::{random_paths, verify_path_axioms, PathSuiteConfig};
use bicat_core::search::{enumerate_bicat_data, enumerate_crossed_modules, SearchConfig};
use bicat_core::verify::verify_all;

use crate::report::*;
use crate::{EnumerateArgs, EquivArgs, PathArgs, RealizeArgs};

type Result<T> = std::result::Result<T, String>;

fn shown(p: &Path) -> String {
    p.display().to_string()
}

pub fn verify(file: &Path) -> Result<Report> {
    let s = load_structure(file).map_err(|e| e.to_string())?;
    let d = &s.data;
    let report = check_conditions(d);
    let conditions = report
        .entries
        .iter()
        .map(|e| ConditionLine {
            condition: e.condition.label().to_string(),
            passed: e.passed,
            witness: e.witness.as_ref().map(ToString::to_string),
        })
        .collect();
    let alpha2_variants =
        report.composition.as_ref().map(|c| c.passing_variants().iter().map(|v| v.name().to_string()).collect());
    Ok(Report::Verify(VerifyReport {
        command: "verify",
        file: shown(file),
        name: s.name,
        x: d.x().name().to_string(),
        b: d.b().name().to_string(),
        conditions,
        alpha2_variants,
        passed: report.passed(),
    }))
}

/// How a dumped structure file should refer to a group given on the
/// command line.
fn group_reference(arg: &str) -> Result<String> {
    if arg.starts_with("catalog:") {
        return Ok(arg.to_string());
    }
    std::fs::canonicalize(arg).map(|p| shown(&p)).map_err(|e| format!("{arg}: {e}"))
}

pub fn enumerate(args: &EnumerateArgs) -> Result<Report> {
    let x = load_group(&args.x).map_err(|e| e.to_string())?;
    let b = load_group(&args.b).map_err(|e| e.to_string())?;
    let result = if args.crossed_modules {
        enumerate_crossed_modules(&x, &b)
    } else {
        enumerate_bicat_data(&x, &b, SearchConfig { budget: args.budget }).map_err(|e| e.to_string())?
    };
    let variants = Alpha2::ALL
        .into_iter()
        .map(|v| VariantCount {
            variant: v.name().to_string(),
            structures: result.structures.iter().filter(|s| s.fingerprint.alpha2.contains(&v)).count(),
        })
        .collect();
    let equivariant = result.structures.iter().filter(|s| s.fingerprint.equivariant.iter().all(|&e| e)).count();
    let dumped = match &args.dump {
        Some(dir) => {
            let (xr, br) = (group_reference(&args.x)?, group_reference(&args.b)?);
            std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", shown(dir)))?;
            for (k, s) in result.structures.iter().enumerate() {
                let name = format!("{}-{}-{k:04}", x.name(), b.name());
                let path = dir.join(format!("{name}.struct"));
                std::fs::write(&path, write_structure(&name, &s.data, &xr, &br)).map_err(|e| format!("{}: {e}", shown(&path)))?;
            }
            Some(shown(dir))
        }
        None => None,
    };
    Ok(Report::Enumerate(EnumerateReport {
        command: "enumerate",
        x: x.name().to_string(),
        b: b.name().to_string(),
        crossed_modules: args.crossed_modules,
        candidates: result.candidates,
        count: result.count(),
        equivariant,
        variants,
        dumped,
    }))
}

/// First directive keyword of a file in the line format.
fn leading_keyword(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", shown(path)))?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or("");
    Ok(first.to_string())
}

pub fn realize(args: &RealizeArgs) -> Result<Report> {
    let file = &args.file;
    let (name, e) = if leading_keyword(file)? == "extended" {
        let e = load_extended(file).map_err(|e| e.to_string())?;
        let name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        (name, e)
    } else {
        let s = load_structure(file).map_err(|e| e.to_string())?;
        let report = check_conditions(&s.data);
        if !report.basic_passed() {
            let f = report.first_failure().expect("some condition fails");
            return Err(format!("{}: structure fails condition {}", shown(file), f.condition));
        }
        let (e, _) = decompose(&s.data).map_err(|e| format!("{}: {e}", shown(file)))?;
        (s.name, e)
    };
    let variant: Alpha2 = args.variant.into();
    let (rb, notes) = realize_with(&e, variant).map_err(|e| format!("{}: {e}", shown(file)))?;
    let axioms = args.check_axioms.then(|| {
        verify_all(&rb)
            .checks
            .into_iter()
            .map(|c| AxiomLine { axiom: c.axiom.name().to_string(), passed: c.passed, witness: c.witness })
            .collect::<Vec<_>>()
    });
    let passed = axioms.as_ref().is_none_or(|a| a.iter().all(|c| c.passed));
    let dumped = match &args.dump {
        Some(p) => {
            std::fs::write(p, rb.dump()).map_err(|e| format!("{}: {e}", shown(p)))?;
            Some(shown(p))
        }
        None => None,
    };
    Ok(Report::Realize(RealizeReport {
        command: "realize",
        file: shown(file),
        name,
        variant: variant.name().to_string(),
        objects: rb.objects,
        one_cells: rb.one_cells(),
        two_cells: rb.two_cells(),
        ordering_sensitive: notes.ordering_sensitive,
        axioms,
        dumped,
        passed,
    }))
}

pub fn maltsev_p1(file: &Path) -> Result<Report> {
    let t = load_triple(file).map_err(|e| e.to_string())?;
    let g = &t.triple;
    let p1 = check_p1(g);
    let prime = p1_prime_witness(g);
    let agree = p1.holds == prime.is_none();
    Ok(Report::P1(P1Report {
        command: "maltsev p1",
        file: shown(file),
        name: t.name.clone(),
        group: g.group().name().to_string(),
        order: g.order(),
        relation_order: p1.relation_order,
        relation_closed: p1.relation_closed,
        p1: p1.holds,
        p1_witness: p1.witness.map(|(a, b)| [a, b]),
        p1_prime: prime.is_none(),
        p1_prime_witness: prime.map(|(a, b)| [a, b]),
        agree,
        passed: p1.holds && agree,
    }))
}

pub fn maltsev_equiv(args: &EquivArgs) -> Result<Report> {
    let file = &args.file;
    let t = load_triple(file).map_err(|e| e.to_string())?;
    let g = &t.triple;
    let p1 = check_p1(g).holds;
    let mut report = EquivReport {
        command: "maltsev equiv",
        file: shown(file),
        name: t.name.clone(),
        group: g.group().name().to_string(),
        p1,
        objects: None,
        composable_pairs: None,
        triple_round_trip: None,
        groupoid_round_trip: None,
        associativity: None,
        passed: false,
    };
    if !p1 {
        return Ok(Report::Equiv(report));
    }
    let c = groupoid_from_triple(g).map_err(|e| e.to_string())?;
    report.objects = Some(c.c0.order());
    report.composable_pairs = Some(c.c2.order());
    let back = triple_from_groupoid(&c).map_err(|e| e.to_string())?;
    let triple_ok = &back == g;
    report.triple_round_trip = Some(triple_ok);
    let again = groupoid_from_triple(&back).map_err(|e| e.to_string())?;
    let id: Vec<usize> = g.group().elements().collect();
    let defect = groupoid_iso_defect(&c, &again, &id);
    report.groupoid_round_trip = Some(defect.clone().unwrap_or_else(|| "isomorphic".into()));
    let a = check_p_associativity_with(g, args.cap, args.seed).map_err(|e| e.to_string())?;
    let failure = a
        .failure
        .map(|f| f.to_vec())
        .or_else(|| a.left_failure.map(|f| f.to_vec()))
        .or_else(|| a.right_failure.map(|f| f.to_vec()));
    let holds = a.holds();
    report.associativity = Some(AssociativityLine {
        solutions: a.solutions.to_string(),
        checked: a.checked,
        exhaustive: a.exhaustive,
        left_checked: a.left_checked,
        right_checked: a.right_checked,
        failure,
        holds,
    });
    report.passed = triple_ok && defect.is_none() && holds;
    Ok(Report::Equiv(report))
}

pub fn path_demo(args: &PathArgs) -> Result<Report> {
    let config = PathSuiteConfig {
        dim: args.dim,
        grid: args.grid,
        paths: args.paths,
        seed: args.seed,
        tolerance: args.tolerance,
    };
    let r = verify_path_axioms(&config).map_err(|e| e.to_string())?;
    let dumped = match &args.dump {
        Some(p) => {
            write_paths(p, &config)?;
            Some(shown(p))
        }
        None => None,
    };
    Ok(Report::Path(PathDemoReport {
        command: "path demo",
        dim: config.dim,
        grid: config.grid,
        paths: r.paths,
        seed: config.seed,
        tolerance: config.tolerance,
        tensor_concat: r.tensor_concat,
        rho_additivity: r.rho_additivity,
        lambda_additivity: r.lambda_additivity,
        boundary: r.boundary,
        d0_d1: r.d0_d1,
        dumped,
        passed: r.passed(),
    }))
}

fn write_paths(p: &PathBuf, config: &PathSuiteConfig) -> Result<()> {
    let paths = random_paths(config.dim, config.grid, config.paths, config.seed).map_err(|e| e.to_string())?;
    let mut out = String::new();
    for (k, z) in paths.iter().enumerate() {
        let _ = writeln!(out, "# path {k}");
        for v in z.samples().chunks(config.dim) {
            let line: Vec<String> = v.iter().map(|c| format!("{c:e}")).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    std::fs::write(p, out).map_err(|e| format!("{}: {e}", shown(p)))
}
