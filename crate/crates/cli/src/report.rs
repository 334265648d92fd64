use std::fmt::Write as _;

use serde::Serialize;

use crate::Format;

#[derive(Debug, Serialize)]
pub struct ConditionLine {
    pub condition: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub file: String,
    pub name: String,
    pub x: String,
    pub b: String,
    pub conditions: Vec<ConditionLine>,
    /// Readings of the middle associator component under which (viii) holds.
    pub alpha2_variants: Option<Vec<String>>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct VariantCount {
    pub variant: String,
    pub structures: usize,
}

#[derive(Debug, Serialize)]
pub struct EnumerateReport {
    pub command: &'static str,
    pub x: String,
    pub b: String,
    pub crossed_modules: bool,
    pub candidates: usize,
    pub count: usize,
    /// Structures whose s, t, lambda, rho all commute with the action.
    pub equivariant: usize,
    pub variants: Vec<VariantCount>,
    pub dumped: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct AxiomLine {
    pub axiom: String,
    pub passed: bool,
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct RealizeReport {
    pub command: &'static str,
    pub file: String,
    pub name: String,
    pub variant: String,
    pub objects: usize,
    pub one_cells: usize,
    pub two_cells: usize,
    pub ordering_sensitive: usize,
    pub axioms: Option<Vec<AxiomLine>>,
    pub dumped: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct P1Report {
    pub command: &'static str,
    pub file: String,
    pub name: String,
    pub group: String,
    pub order: usize,
    pub relation_order: usize,
    pub relation_closed: bool,
    pub p1: bool,
    pub p1_witness: Option<[[usize; 3]; 2]>,
    pub p1_prime: bool,
    pub p1_prime_witness: Option<[usize; 2]>,
    pub agree: bool,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct AssociativityLine {
    pub solutions: String,
    pub checked: u64,
    pub exhaustive: bool,
    pub left_checked: u64,
    pub right_checked: u64,
    pub failure: Option<Vec<usize>>,
    pub holds: bool,
}

#[derive(Debug, Serialize)]
pub struct EquivReport {
    pub command: &'static str,
    pub file: String,
    pub name: String,
    pub group: String,
    pub p1: bool,
    pub objects: Option<usize>,
    pub composable_pairs: Option<usize>,
    pub triple_round_trip: Option<bool>,
    pub groupoid_round_trip: Option<String>,
    pub associativity: Option<AssociativityLine>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct PathDemoReport {
    pub command: &'static str,
    pub dim: usize,
    pub grid: usize,
    pub paths: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub tensor_concat: f64,
    pub rho_additivity: f64,
    pub lambda_additivity: f64,
    pub boundary: f64,
    pub d0_d1: f64,
    pub dumped: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Report {
    Verify(VerifyReport),
    Enumerate(EnumerateReport),
    Realize(RealizeReport),
    P1(P1Report),
    Equiv(EquivReport),
    Path(PathDemoReport),
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

fn or_none<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), T::to_string)
}

impl Report {
    pub fn passed(&self) -> bool {
        match self {
            Report::Verify(r) => r.passed,
            Report::Enumerate(_) => true,
            Report::Realize(r) => r.passed,
            Report::P1(r) => r.passed,
            Report::Equiv(r) => r.passed,
            Report::Path(r) => r.passed,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => self.text(),
        }
    }

    fn text(&self) -> String {
        let mut o = String::new();
        match self {
            Report::Verify(r) => {
                let _ = writeln!(o, "structure {} in {} (X = {}, B = {})", r.name, r.file, r.x, r.b);
                for c in &r.conditions {
                    let _ = write!(o, "  {:<7} {}", c.condition, verdict(c.passed));
                    if let Some(w) = &c.witness {
                        let _ = write!(o, "  {w}");
                    }
                    o.push('\n');
                }
                if let Some(vs) = &r.alpha2_variants {
                    let _ = writeln!(o, "alpha2 variants passing (viii): {}", if vs.is_empty() { "none".into() } else { vs.join(", ") });
                }
                let _ = writeln!(o, "verdict: {}", verdict(r.passed));
            }
            Report::Enumerate(r) => {
                let kind = if r.crossed_modules { "crossed modules" } else { "structures" };
                let _ = writeln!(o, "{kind} on X = {}, B = {}", r.x, r.b);
                let _ = writeln!(o, "  candidates checked  {}", r.candidates);
                let _ = writeln!(o, "  valid               {}", r.count);
                let _ = writeln!(o, "  equivariant         {}", r.equivariant);
                for v in &r.variants {
                    let _ = writeln!(o, "  (viii) under {:<14} {}", v.variant, v.structures);
                }
                if let Some(d) = &r.dumped {
                    let _ = writeln!(o, "dumped to {d}");
                }
            }
            Report::Realize(r) => {
                let _ = writeln!(o, "realization of {} in {} (alpha2 {})", r.name, r.file, r.variant);
                let _ = writeln!(o, "  objects {}, 1-cells {}, 2-cells {}", r.objects, r.one_cells, r.two_cells);
                let _ = writeln!(o, "  order-sensitive 1-cell tensors {}", r.ordering_sensitive);
                if let Some(axioms) = &r.axioms {
                    for a in axioms {
                        let _ = write!(o, "  {:<26} {}", a.axiom, verdict(a.passed));
                        if let Some(w) = &a.witness {
                            let _ = write!(o, "  {w:?}");
                        }
                        o.push('\n');
                    }
                }
                if let Some(d) = &r.dumped {
                    let _ = writeln!(o, "dumped to {d}");
                }
                let _ = writeln!(o, "verdict: {}", verdict(r.passed));
            }
            Report::P1(r) => {
                let _ = writeln!(o, "triple {} in {} on {} (order {})", r.name, r.file, r.group, r.order);
                let _ = writeln!(o, "  R(s,t) order {}, closed {}", r.relation_order, r.relation_closed);
                let _ = write!(o, "  (P1)  {}", verdict(r.p1));
                if let Some([a, b]) = &r.p1_witness {
                    let _ = write!(o, "  {a:?} {b:?}");
                }
                o.push('\n');
                let _ = write!(o, "  (P1') {}", verdict(r.p1_prime));
                if let Some(w) = &r.p1_prime_witness {
                    let _ = write!(o, "  {w:?}");
                }
                o.push('\n');
                let _ = writeln!(o, "  agree {}", r.agree);
                let _ = writeln!(o, "verdict: {}", verdict(r.passed));
            }
            Report::Equiv(r) => {
                let _ = writeln!(o, "triple {} in {} on {}", r.name, r.file, r.group);
                let _ = writeln!(o, "  (P1) {}", verdict(r.p1));
                let _ = writeln!(o, "  objects {}, composable pairs {}", or_none(&r.objects), or_none(&r.composable_pairs));
                let _ = writeln!(o, "  triple round trip {}", or_none(&r.triple_round_trip));
                let _ = writeln!(o, "  groupoid round trip {}", or_none(&r.groupoid_round_trip));
                if let Some(a) = &r.associativity {
                    let _ = writeln!(
                        o,
                        "  associativity {} ({} of {} tuples, exhaustive {}; left {}, right {})",
                        verdict(a.holds),
                        a.checked,
                        a.solutions,
                        a.exhaustive,
                        a.left_checked,
                        a.right_checked
                    );
                    if let Some(f) = &a.failure {
                        let _ = writeln!(o, "  failure {f:?}");
                    }
                }
                let _ = writeln!(o, "verdict: {}", verdict(r.passed));
            }
            Report::Path(r) => {
                let _ = writeln!(
                    o,
                    "path demo: {} paths in dimension {}, grid {}, seed {}, tolerance {:e}",
                    r.paths, r.dim, r.grid, r.seed, r.tolerance
                );
                let _ = writeln!(o, "  max |tensor - concat|  {:e}", r.tensor_concat);
                let _ = writeln!(o, "  rho0 additivity        {:e}", r.rho_additivity);
                let _ = writeln!(o, "  lambda0 additivity     {:e}", r.lambda_additivity);
                let _ = writeln!(o, "  homotopy boundary      {:e}", r.boundary);
                let _ = writeln!(o, "  d0 d1                  {:e}", r.d0_d1);
                if let Some(d) = &r.dumped {
                    let _ = writeln!(o, "dumped to {d}");
                }
                let _ = writeln!(o, "verdict: {}", verdict(r.passed));
            }
        }
        o
    }
}
