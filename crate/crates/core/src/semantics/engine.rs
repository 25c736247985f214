//! Table-driven exhaustive evaluation.
//!
//! A [`Model`] flattens a finite structure into operation tables over
//! "codes" `0..d`; a [`Program`] is a formula compiled to a shared DAG.
//! Validity checking walks all valuations in lexicographic order, one row
//! per assignment of all but the last variable, and computes each row as a
//! vector over the last variable.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{SemanticsError, Structure};
use crate::formula::{Formula, LanguageTag};

/// Structures whose domain exceeds this are not tabulated.
pub const MAX_TABLE_DOMAIN: usize = 2048;

/// Default bound on the number of valuations a single check may visit.
pub const DEFAULT_VALUATION_CAP: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_VALUATION_CAP`].
pub const CAP_ENV_VAR: &str = "TWISTLAB_VALUATION_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub cap: u128,
    pub parallel: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            cap: DEFAULT_VALUATION_CAP,
            parallel: false,
        }
    }
}

impl CheckConfig {
    /// Default settings with the cap taken from the environment when set.
    pub fn from_env() -> CheckConfig {
        let cap = std::env::var(CAP_ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<u128>().ok())
            .filter(|&c| c > 0)
            .unwrap_or(DEFAULT_VALUATION_CAP);
        CheckConfig {
            cap,
            ..CheckConfig::default()
        }
    }

    pub fn parallel(mut self, on: bool) -> CheckConfig {
        self.parallel = on;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Var(usize),
    Bot,
    SNot(usize),
    Nec(usize),
    Poss(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

/// A formula compiled to a DAG in evaluation order.
#[derive(Debug, Clone)]
pub struct Program {
    vars: Vec<String>,
    nodes: Vec<Node>,
    deps: Vec<u64>,
    root: usize,
    language: LanguageTag,
    source: String,
}

impl Program {
    /// Compiles the desugared form of `phi`; variables are ordered by name.
    pub fn compile(phi: &Formula) -> Program {
        let f = phi.desugar();
        let vars: Vec<String> = f.vars().into_iter().collect();
        assert!(vars.len() <= 64, "at most 64 variables are supported");
        let mut p = Program {
            vars,
            nodes: Vec::new(),
            deps: Vec::new(),
            root: 0,
            language: phi.language_of(),
            source: phi.to_string(),
        };
        let mut memo = HashMap::new();
        p.root = p.add(&f, &mut memo);
        p
    }

    fn add(&mut self, f: &Formula, memo: &mut HashMap<Node, usize>) -> usize {
        let node = match f {
            Formula::Var(v) => Node::Var(self.vars.binary_search(v).expect("collected")),
            Formula::Bot => Node::Bot,
            Formula::SNeg(a) => Node::SNot(self.add(a, memo)),
            Formula::Box(a) => Node::Nec(self.add(a, memo)),
            Formula::Dia(a) => Node::Poss(self.add(a, memo)),
            Formula::And(a, b) => Node::And(self.add(a, memo), self.add(b, memo)),
            Formula::Or(a, b) => Node::Or(self.add(a, memo), self.add(b, memo)),
            Formula::Imp(a, b) => Node::Imp(self.add(a, memo), self.add(b, memo)),
            other => unreachable!("sugar survived desugaring: {other}"),
        };
        if let Some(&i) = memo.get(&node) {
            return i;
        }
        let dep = match node {
            Node::Var(v) => 1u64 << v,
            Node::Bot => 0,
            Node::SNot(a) | Node::Nec(a) | Node::Poss(a) => self.deps[a],
            Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => self.deps[a] | self.deps[b],
        };
        self.nodes.push(node);
        self.deps.push(dep);
        memo.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// Variables in valuation order (the first is most significant).
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn language(&self) -> LanguageTag {
        self.language
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn uses_sneg(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::SNot(_)))
    }

    fn uses_modal(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::Nec(_) | Node::Poss(_)))
    }
}

/// A finite structure flattened to operation tables.
#[derive(Debug, Clone)]
pub struct Model {
    kind: &'static str,
    d: usize,
    and: Vec<u16>,
    or: Vec<u16>,
    imp: Vec<u16>,
    snot: Option<Vec<u16>>,
    nec: Option<Vec<u16>>,
    poss: Option<Vec<u16>>,
    bot: u16,
    designated: Vec<bool>,
}

/// Least refuting valuation (codes in variable order) and the value there.
pub type Refutation = (Vec<usize>, usize);

struct Scratch {
    codes: Vec<u16>,
    scalar: Vec<u16>,
    vecs: Vec<Vec<u16>>,
}

impl Model {
    pub fn new(s: Structure<'_>) -> Result<Model, SemanticsError> {
        let d = s.domain_size();
        if d > MAX_TABLE_DOMAIN {
            return Err(SemanticsError::DomainTooLarge {
                size: d,
                max: MAX_TABLE_DOMAIN,
            });
        }
        let bin = |f: &dyn Fn(usize, usize) -> usize| -> Vec<u16> {
            let mut t = Vec::with_capacity(d * d);
            for a in 0..d {
                for b in 0..d {
                    t.push(f(a, b) as u16);
                }
            }
            t
        };
        let un = |f: &dyn Fn(usize) -> usize| -> Vec<u16> { (0..d).map(|a| f(a) as u16).collect() };
        Ok(match s {
            Structure::Heyting(h) => Model {
                kind: "Heyting algebra",
                d,
                and: bin(&|a, b| h.meet(a, b)),
                or: bin(&|a, b| h.join(a, b)),
                imp: bin(&|a, b| h.imp(a, b)),
                snot: None,
                nec: None,
                poss: None,
                bot: h.bot() as u16,
                designated: (0..d).map(|a| a == h.top()).collect(),
            },
            Structure::Tba(b) => {
                let h = b.algebra();
                Model {
                    kind: "topological Boolean algebra",
                    d,
                    and: bin(&|x, y| h.meet(x, y)),
                    or: bin(&|x, y| h.join(x, y)),
                    imp: bin(&|x, y| h.imp(x, y)),
                    snot: None,
                    nec: Some(un(&|x| b.nec(x))),
                    poss: Some(un(&|x| b.poss(x))),
                    bot: h.bot() as u16,
                    designated: (0..d).map(|a| a == h.top()).collect(),
                }
            }
            Structure::Twist(t) => {
                use crate::twist::TwistOp;
                let c = t.carrier();
                let code = |p: (usize, usize)| t.index_of(p).expect("carrier is closed");
                let b2 = |op: TwistOp| bin(&|x, y| code(t.op_raw(op, &[c[x], c[y]]).unwrap()));
                let u1 = |op: TwistOp| un(&|x| code(t.op_raw(op, &[c[x]]).unwrap()));
                let modal = t.base().tba().is_some();
                let top = t.lattice().top();
                Model {
                    kind: if modal {
                        "twist-structure over a topological Boolean algebra"
                    } else {
                        "twist-structure over a Heyting algebra"
                    },
                    d,
                    and: b2(TwistOp::And),
                    or: b2(TwistOp::Or),
                    imp: b2(TwistOp::Imp),
                    snot: Some(u1(TwistOp::SNot)),
                    nec: modal.then(|| u1(TwistOp::Nec)),
                    poss: modal.then(|| u1(TwistOp::Poss)),
                    bot: code(t.op_raw(TwistOp::Bot, &[]).unwrap()) as u16,
                    designated: c.iter().map(|&(a, _)| a == top).collect(),
                }
            }
        })
    }

    pub fn domain_size(&self) -> usize {
        self.d
    }

    pub fn is_designated(&self, code: usize) -> bool {
        self.designated[code]
    }

    /// Rejects programs using connectives the structure lacks.
    pub fn supports(&self, p: &Program) -> Result<(), SemanticsError> {
        let missing_sneg = p.uses_sneg() && self.snot.is_none();
        let missing_modal = p.uses_modal() && self.nec.is_none();
        if missing_sneg || missing_modal {
            return Err(SemanticsError::LanguageMismatch {
                formula: p.source.clone(),
                language: p.language,
                structure: self.kind.to_string(),
            });
        }
        Ok(())
    }

    /// Value of the program under `codes` (one per variable, in order).
    pub fn eval(&self, p: &Program, codes: &[usize]) -> Result<usize, SemanticsError> {
        self.supports(p)?;
        assert_eq!(codes.len(), p.vars.len());
        let d = self.d;
        let mut val = vec![0u16; p.nodes.len()];
        for (i, node) in p.nodes.iter().enumerate() {
            val[i] = match *node {
                Node::Var(v) => codes[v] as u16,
                Node::Bot => self.bot,
                Node::SNot(a) => self.snot.as_ref().unwrap()[val[a] as usize],
                Node::Nec(a) => self.nec.as_ref().unwrap()[val[a] as usize],
                Node::Poss(a) => self.poss.as_ref().unwrap()[val[a] as usize],
                Node::And(a, b) => self.and[val[a] as usize * d + val[b] as usize],
                Node::Or(a, b) => self.or[val[a] as usize * d + val[b] as usize],
                Node::Imp(a, b) => self.imp[val[a] as usize * d + val[b] as usize],
            };
        }
        Ok(val[p.root] as usize)
    }

    /// Finds the lexicographically least refuting valuation, if any.
    pub fn refute(&self, p: &Program, cfg: &CheckConfig) -> Result<Option<Refutation>, SemanticsError> {
        self.supports(p)?;
        let k = p.vars.len();
        let d = self.d;
        let total = (d as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if total > cfg.cap {
            return Err(SemanticsError::ResourceLimit {
                valuations: total,
                cap: cfg.cap,
            });
        }
        if k == 0 {
            let v = self.eval(p, &[])?;
            return Ok((!self.designated[v]).then(|| (Vec::new(), v)));
        }
        let rows = total as usize / d;
        let new_scratch = || Scratch {
            codes: vec![0; k],
            scalar: vec![0; p.nodes.len()],
            vecs: p
                .deps
                .iter()
                .enumerate()
                .map(|(i, &dep)| {
                    if dep >> (k - 1) & 1 == 0 {
                        Vec::new()
                    } else if p.nodes[i] == Node::Var(k - 1) {
                        (0..d as u16).collect()
                    } else {
                        vec![0; d]
                    }
                })
                .collect(),
        };
        if cfg.parallel && rows > 1 {
            Ok((0..rows)
                .into_par_iter()
                .map_init(new_scratch, |s, row| self.run_row(p, s, row))
                .find_map_first(|r| r))
        } else {
            let mut s = new_scratch();
            Ok((0..rows).find_map(|row| self.run_row(p, &mut s, row)))
        }
    }

    fn run_row(&self, p: &Program, s: &mut Scratch, row: usize) -> Option<Refutation> {
        let k = p.vars.len();
        let d = self.d;
        let last = k - 1;
        let mut r = row;
        for i in (0..last).rev() {
            s.codes[i] = (r % d) as u16;
            r /= d;
        }
        let vector = |i: usize| p.deps[i] >> last & 1 == 1;
        for (i, node) in p.nodes.iter().enumerate() {
            if !vector(i) {
                let sc = &s.scalar;
                let v = match *node {
                    Node::Var(v) => s.codes[v],
                    Node::Bot => self.bot,
                    Node::SNot(a) => self.snot.as_ref().unwrap()[sc[a] as usize],
                    Node::Nec(a) => self.nec.as_ref().unwrap()[sc[a] as usize],
                    Node::Poss(a) => self.poss.as_ref().unwrap()[sc[a] as usize],
                    Node::And(a, b) => self.and[sc[a] as usize * d + sc[b] as usize],
                    Node::Or(a, b) => self.or[sc[a] as usize * d + sc[b] as usize],
                    Node::Imp(a, b) => self.imp[sc[a] as usize * d + sc[b] as usize],
                };
                s.scalar[i] = v;
                continue;
            }
            let (lo, hi) = s.vecs.split_at_mut(i);
            let out = &mut hi[0];
            match *node {
                Node::Var(_) => {}
                Node::Bot => unreachable!(),
                Node::SNot(a) | Node::Nec(a) | Node::Poss(a) => {
                    let t = match *node {
                        Node::SNot(_) => self.snot.as_ref(),
                        Node::Nec(_) => self.nec.as_ref(),
                        _ => self.poss.as_ref(),
                    }
                    .unwrap();
                    for (o, &x) in out.iter_mut().zip(&lo[a]) {
                        *o = t[x as usize];
                    }
                }
                Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => {
                    let t = match *node {
                        Node::And(..) => &self.and,
                        Node::Or(..) => &self.or,
                        _ => &self.imp,
                    };
                    match (vector(a), vector(b)) {
                        (true, true) => {
                            for ((o, &x), &y) in out.iter_mut().zip(&lo[a]).zip(&lo[b]) {
                                *o = t[x as usize * d + y as usize];
                            }
                        }
                        (true, false) => {
                            let y = s.scalar[b] as usize;
                            for (o, &x) in out.iter_mut().zip(&lo[a]) {
                                *o = t[x as usize * d + y];
                            }
                        }
                        (false, true) => {
                            let row = &t[s.scalar[a] as usize * d..][..d];
                            for (o, &y) in out.iter_mut().zip(&lo[b]) {
                                *o = row[y as usize];
                            }
                        }
                        (false, false) => unreachable!(),
                    }
                }
            }
        }
        let witness = |x: usize, v: u16| {
            let mut codes: Vec<usize> = s.codes[..last].iter().map(|&c| c as usize).collect();
            codes.push(x);
            (codes, v as usize)
        };
        if vector(p.root) {
            let root = &s.vecs[p.root];
            root.iter()
                .position(|&v| !self.designated[v as usize])
                .map(|x| witness(x, root[x]))
        } else {
            let v = s.scalar[p.root];
            (!self.designated[v as usize]).then(|| witness(0, v))
        }
    }
}
