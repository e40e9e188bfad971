use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::logic::Atom;
use crate::pddl::{parse_domain, parse_problem, DomainModel, ProblemModel};

/// Domains shipped with the crate, each with a small random instance
/// generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BundledDomain {
    TriangleTireworld,
    Tireworld,
    Blocksworld,
    Logistics,
    Zenotravel,
    Tidyup,
}

/// A generated initial state with the facts that may appear in goals.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub problem: ProblemModel,
    /// Fluent atoms false in the initial state.
    pub facts: Vec<Atom>,
}

impl BundledDomain {
    pub const ALL: [BundledDomain; 6] = [
        BundledDomain::TriangleTireworld,
        BundledDomain::Tireworld,
        BundledDomain::Blocksworld,
        BundledDomain::Logistics,
        BundledDomain::Zenotravel,
        BundledDomain::Tidyup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BundledDomain::TriangleTireworld => "triangle-tireworld",
            BundledDomain::Tireworld => "tireworld",
            BundledDomain::Blocksworld => "blocksworld",
            BundledDomain::Logistics => "logistics",
            BundledDomain::Zenotravel => "zenotravel",
            BundledDomain::Tidyup => "tidyup",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.pddl", self.name())
    }

    pub fn text(self) -> &'static str {
        match self {
            BundledDomain::TriangleTireworld => {
                include_str!("../../domains/triangle-tireworld.pddl")
            }
            BundledDomain::Tireworld => include_str!("../../domains/tireworld.pddl"),
            BundledDomain::Blocksworld => include_str!("../../domains/blocksworld.pddl"),
            BundledDomain::Logistics => include_str!("../../domains/logistics.pddl"),
            BundledDomain::Zenotravel => include_str!("../../domains/zenotravel.pddl"),
            BundledDomain::Tidyup => include_str!("../../domains/tidyup.pddl"),
        }
    }

    pub fn domain(self) -> DomainModel {
        parse_domain(self.text()).expect("bundled domains parse")
    }

    /// A random small instance named `name`.
    pub fn instance(self, rng: &mut impl Rng, name: &str) -> Instance {
        let mut b = Builder::default();
        match self {
            BundledDomain::TriangleTireworld => triangle(&mut b, rng),
            BundledDomain::Tireworld => tireworld(&mut b, rng),
            BundledDomain::Blocksworld => blocksworld(&mut b, rng),
            BundledDomain::Logistics => logistics(&mut b, rng),
            BundledDomain::Zenotravel => zenotravel(&mut b, rng),
            BundledDomain::Tidyup => tidyup(&mut b, rng),
        }
        let domain = self.domain();
        let problem = parse_problem(&b.text(name, &domain.name)).expect("generated problems parse");
        let init: std::collections::BTreeSet<&Atom> = problem.init.iter().collect();
        let facts = b.facts.into_iter().filter(|a| !init.contains(a)).collect();
        Instance { problem, facts }
    }
}

impl std::fmt::Display for BundledDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BundledDomain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        BundledDomain::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown bundled domain `{s}`"))
    }
}

#[derive(Default)]
struct Builder {
    objects: Vec<(String, String)>,
    init: Vec<String>,
    facts: Vec<Atom>,
}

impl Builder {
    fn object(&mut self, name: impl Into<String>, ty: &str) -> String {
        let name = name.into();
        self.objects.push((name.clone(), ty.to_string()));
        name
    }

    fn init(&mut self, pred: &str, args: &[&str]) {
        let mut s = format!("({pred}");
        for a in args {
            s.push(' ');
            s.push_str(a);
        }
        s.push(')');
        self.init.push(s);
    }

    fn fact(&mut self, pred: &str, args: &[&str]) {
        self.facts.push(Atom::ground(pred, args));
    }

    fn text(&self, name: &str, domain: &str) -> String {
        let mut out = format!("(define (problem {name})\n  (:domain {domain})\n  (:objects");
        for (o, t) in &self.objects {
            write!(out, " {o} - {t}").unwrap();
        }
        out.push_str(")\n  (:init");
        for f in &self.init {
            write!(out, " {f}").unwrap();
        }
        out.push_str(")\n  (:goal (and)))\n");
        out
    }
}

/// One-way triangular road grid from corner `11`; spares at random.
fn triangle(b: &mut Builder, rng: &mut impl Rng) {
    let k = 4;
    let name = |r: usize, c: usize| format!("{r}{c}");
    for r in 1..=k {
        for c in 1..=k + 1 - r {
            b.object(name(r, c), "location");
        }
    }
    b.init("vAt", &["11"]);
    for r in 1..=k {
        for c in 1..=k + 1 - r {
            let here = name(r, c);
            if r + c <= k {
                b.init("road", &[&here, &name(r + 1, c)]);
            }
            if r + c <= k {
                b.init("road", &[&here, &name(r, c + 1)]);
            }
            if here != "11" {
                if rng.gen_bool(0.6) {
                    b.init("spare-in", &[&here]);
                }
                b.fact("vAt", &[&here]);
            }
        }
    }
}

/// Random connected two-way road network.
fn tireworld(b: &mut Builder, rng: &mut impl Rng) {
    let n = 5;
    let locs: Vec<String> = (1..=n)
        .map(|i| b.object(format!("l{i}"), "location"))
        .collect();
    let mut edges = std::collections::BTreeSet::new();
    for i in 1..n {
        edges.insert((rng.gen_range(0..i), i));
    }
    let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
    if x != y {
        edges.insert((x.min(y), x.max(y)));
    }
    for (i, j) in edges {
        b.init("road", &[&locs[i], &locs[j]]);
        b.init("road", &[&locs[j], &locs[i]]);
    }
    b.init("vehicle-at", &[&locs[0]]);
    for l in &locs[1..] {
        if rng.gen_bool(0.5) {
            b.init("spare-in", &[l]);
        }
        b.fact("vehicle-at", &[l]);
    }
}

/// Random towers of four blocks.
fn blocksworld(b: &mut Builder, rng: &mut impl Rng) {
    let mut blocks: Vec<String> = (1..=4)
        .map(|i| b.object(format!("b{i}"), "block"))
        .collect();
    let names = blocks.clone();
    blocks.shuffle(rng);
    b.init("emptyhand", &[]);
    let mut covered = Vec::new();
    let mut below: Option<&String> = None;
    for blk in &blocks {
        match below {
            Some(u) if rng.gen_bool(0.5) => {
                b.init("on", &[blk, u]);
                covered.push(u);
            }
            _ => b.init("on-table", &[blk]),
        }
        below = Some(blk);
    }
    for blk in &names {
        if !covered.contains(&blk) {
            b.init("clear", &[blk]);
        }
    }
    for x in &names {
        b.fact("on-table", &[x]);
        for y in &names {
            if x != y {
                b.fact("on", &[x, y]);
            }
        }
    }
}

/// Two cities with an airport and a depot each, one truck per city, one
/// airplane and two packages.
fn logistics(b: &mut Builder, rng: &mut impl Rng) {
    let cities = [b.object("c1", "city"), b.object("c2", "city")];
    let airports = [b.object("a1", "airport"), b.object("a2", "airport")];
    let depots = [b.object("d1", "location"), b.object("d2", "location")];
    let trucks = [b.object("t1", "truck"), b.object("t2", "truck")];
    let plane = b.object("p1", "airplane");
    let pkgs = [b.object("k1", "package"), b.object("k2", "package")];
    let places: Vec<&String> = airports.iter().chain(&depots).collect();
    for i in 0..2 {
        b.init("in-city", &[&airports[i], &cities[i]]);
        b.init("in-city", &[&depots[i], &cities[i]]);
        let start = if rng.gen_bool(0.5) {
            &airports[i]
        } else {
            &depots[i]
        };
        b.init("at", &[&trucks[i], start]);
    }
    b.init("at", &[&plane, &airports[rng.gen_range(0..2)]]);
    for k in &pkgs {
        b.init("at", &[k, places[rng.gen_range(0..places.len())]]);
        for p in &places {
            b.fact("at", &[k, p]);
        }
    }
}

/// One aircraft, two passengers, three cities, three fuel levels.
fn zenotravel(b: &mut Builder, rng: &mut impl Rng) {
    let cities: Vec<String> = (1..=3).map(|i| b.object(format!("c{i}"), "city")).collect();
    let plane = b.object("a1", "aircraft");
    let people = [b.object("p1", "person"), b.object("p2", "person")];
    let levels: Vec<String> = (0..3)
        .map(|i| b.object(format!("f{i}"), "flevel"))
        .collect();
    b.init("next", &[&levels[0], &levels[1]]);
    b.init("next", &[&levels[1], &levels[2]]);
    b.init("aircraft-at", &[&plane, &cities[rng.gen_range(0..3)]]);
    b.init("fuel-level", &[&plane, &levels[rng.gen_range(1..3)]]);
    for p in &people {
        b.init("person-at", &[p, &cities[rng.gen_range(0..3)]]);
        for c in &cities {
            b.fact("person-at", &[p, c]);
        }
    }
    for c in &cities {
        b.fact("aircraft-at", &[&plane, c]);
    }
}

/// Three rooms in a row, two surfaces and two items.
fn tidyup(b: &mut Builder, rng: &mut impl Rng) {
    let rooms: Vec<String> = (1..=3).map(|i| b.object(format!("r{i}"), "room")).collect();
    let surfaces = [b.object("desk1", "surface"), b.object("table1", "surface")];
    let items = [b.object("book1", "item"), b.object("cup1", "item")];
    for w in rooms.windows(2) {
        b.init("connected", &[&w[0], &w[1]]);
        b.init("connected", &[&w[1], &w[0]]);
    }
    b.init("robot-at", &[&rooms[rng.gen_range(0..3)]]);
    b.init("handempty", &[]);
    b.init("surface-in", &[&surfaces[0], &rooms[1]]);
    b.init("surface-in", &[&surfaces[1], &rooms[2]]);
    for i in &items {
        if rng.gen_bool(0.3) {
            b.init("on", &[i, &surfaces[rng.gen_range(0..2)]]);
        } else {
            b.init("item-at", &[i, &rooms[rng.gen_range(0..3)]]);
        }
        for s in &surfaces {
            b.fact("on", &[i, s]);
        }
    }
    for s in &surfaces {
        b.fact("wiped", &[s]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::ground;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instances_ground_and_are_deterministic() {
        for d in BundledDomain::ALL {
            assert_eq!(d.name().parse::<BundledDomain>(), Ok(d));
            for seed in 0..5 {
                let mut r1 = ChaCha8Rng::seed_from_u64(seed);
                let mut r2 = ChaCha8Rng::seed_from_u64(seed);
                let a = d.instance(&mut r1, "p");
                assert_eq!(a, d.instance(&mut r2, "p"));
                assert!(!a.facts.is_empty(), "{d}");
                let m = ground(&d.domain(), &a.problem).unwrap();
                assert!(m.num_actions() > 0, "{d}");
                assert!(a.facts.iter().all(|f| !a.problem.init.contains(f)));
            }
        }
    }
}
