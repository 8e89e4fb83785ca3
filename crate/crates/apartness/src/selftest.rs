//! Seeded runs of the invariant battery.

use std::fmt::Write as _;
use std::thread;

use apartness_core::apartness::Mutation;
use apartness_core::Lts;

use crate::aut::write_aut;
use crate::minimize::minimize;
use crate::properties::{check, check_coalgebra, check_dfa, check_stream, LtsProperty, Relations};
use crate::random::{random_coalgebra, random_dfa, random_lts, random_stream, rng, LtsConfig};

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub count: usize,
    pub max_states: usize,
    pub max_labels: usize,
    /// Fixed density, or `None` to cycle through 0.1, 0.25 and 0.4.
    pub density: Option<f64>,
    pub mutation: Mutation,
    pub max_carrier: usize,
    pub max_ty_depth: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            count: 200,
            max_states: 8,
            max_labels: 3,
            density: None,
            mutation: Mutation::None,
            max_carrier: 6,
            max_ty_depth: 4,
        }
    }
}

pub const DENSITIES: [f64; 3] = [0.1, 0.25, 0.4];

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub suite: &'static str,
    pub seed: u64,
    pub property: String,
    pub detail: String,
    /// Shrunk counterexample in `.aut` form, for transition-system failures.
    pub minimized: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub systems: usize,
    pub coalgebras: usize,
    pub automata: usize,
    pub streams: usize,
    /// Runs in which the alternative visible rule gave all of branching
    /// apartness. Reported only; nothing is asserted about it.
    pub alt_complete: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "transition systems: {}", self.systems);
        let _ = writeln!(s, "coalgebras: {}", self.coalgebras);
        let _ = writeln!(s, "automata: {}", self.automata);
        let _ = writeln!(s, "streams: {}", self.streams);
        let _ = writeln!(s, "alternative rule complete on {}/{} systems", self.alt_complete, self.systems);
        if self.failures.is_empty() {
            let _ = writeln!(s, "all properties hold");
        }
        for f in &self.failures {
            let _ = writeln!(s, "VIOLATION [{}] seed {}: {}: {}", f.suite, f.seed, f.property, f.detail);
            if let Some(m) = &f.minimized {
                let _ = writeln!(s, "minimized counterexample:\n{m}");
            }
        }
        s
    }
}

struct SystemOutcome {
    alt_complete: bool,
    failures: Vec<Failure>,
}

fn run_system(cfg: &SelftestConfig, i: usize) -> SystemOutcome {
    let seed = cfg.seed.wrapping_add(i as u64);
    let density = cfg.density.unwrap_or(DENSITIES[i % DENSITIES.len()]);
    let lcfg = LtsConfig { max_states: cfg.max_states, max_labels: cfg.max_labels, density, tau_share: 1.0 };
    let lts = random_lts(&mut rng(seed), &lcfg);
    let rel = Relations::new(&lts, cfg.mutation);
    let mut failures = Vec::new();
    for prop in LtsProperty::ALL {
        if let Some(detail) = check(&lts, &rel, prop, cfg.mutation) {
            let fails = |l: &Lts| check(l, &Relations::new(l, cfg.mutation), prop, cfg.mutation).is_some();
            let small = minimize(&lts, fails);
            failures.push(Failure {
                suite: "lts",
                seed,
                property: prop.name().into(),
                detail,
                minimized: Some(write_aut(&small, "tau")),
            });
        }
    }
    SystemOutcome { alt_complete: rel.alt == rel.branching, failures }
}

fn run_coalgebra(cfg: &SelftestConfig, i: usize) -> Vec<Failure> {
    let seed = cfg.seed.wrapping_add(i as u64);
    let mut r = rng(seed ^ 0xC0A1_6EB2A);
    let mut out = Vec::new();
    let mut fail = |suite, property: &str, detail| {
        out.push(Failure { suite, seed, property: property.into(), detail, minimized: None });
    };
    let c = random_coalgebra(&mut r, cfg.max_carrier, cfg.max_ty_depth);
    if let Some(d) = check_coalgebra(&c, &mut r) {
        fail("coalgebra", "lifting and fixpoint laws", d);
    }
    let dfa = random_dfa(&mut r, cfg.max_carrier);
    let dc = dfa.coalgebra();
    if let Some(d) = check_coalgebra(&dc, &mut r).or_else(|| check_dfa(&dfa)) {
        fail("automaton", "generic apartness matches automaton rules and word search", d);
    }
    let stream = random_stream(&mut r, cfg.max_carrier);
    if let Some(d) = check_stream(&stream) {
        fail("stream", "stream distinguisher matches apartness", d);
    }
    out
}

/// Runs every suite. Work is spread over threads, but the report only
/// depends on the configuration.
pub fn run(cfg: &SelftestConfig) -> Report {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(cfg.count.max(1));
    let mut systems: Vec<Option<SystemOutcome>> = (0..cfg.count).map(|_| None).collect();
    let mut coalgebras: Vec<Vec<Failure>> = vec![Vec::new(); cfg.count];
    thread::scope(|s| {
        let chunk = cfg.count.div_ceil(workers).max(1);
        for (k, (sys, co)) in systems.chunks_mut(chunk).zip(coalgebras.chunks_mut(chunk)).enumerate() {
            s.spawn(move || {
                for (j, (a, b)) in sys.iter_mut().zip(co.iter_mut()).enumerate() {
                    let i = k * chunk + j;
                    *a = Some(run_system(cfg, i));
                    *b = run_coalgebra(cfg, i);
                }
            });
        }
    });
    let mut report = Report { systems: cfg.count, coalgebras: cfg.count, automata: cfg.count, streams: cfg.count, ..Default::default() };
    for o in systems.into_iter().flatten() {
        report.alt_complete += usize::from(o.alt_complete);
        report.failures.extend(o.failures);
    }
    // Keep transition-system failures first, then the coalgebra suites.
    for f in coalgebras.into_iter().flatten() {
        report.failures.push(f);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_report() {
        let cfg = SelftestConfig { count: 6, seed: 11, ..Default::default() };
        assert_eq!(run(&cfg), run(&cfg));
    }
}
