//! Random words over the generators of a tailed graph, and a reducer that
//! applies the defining relations one adjacent pair at a time.

use afembed_core::symbolic::coeff::{imag_unit, real};
use afembed_core::symbolic::{CkContext, CkTerm, Letter};
use afembed_core::{embed, materialize, AugmentedGraphSpec, Graph};
use rand::Rng;

use super::random_condition5_graph;

/// A generator symbol for the oracle: `(kind, id)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sym {
    P(String),
    S(String),
    SStar(String),
    T(String),
    TStar(String),
}

pub struct Vocabulary {
    pub graph: Graph,
    pub tails: Vec<(String, String)>,
}

impl Vocabulary {
    pub fn new(spec: &AugmentedGraphSpec, depth: usize) -> Self {
        Vocabulary {
            graph: materialize(spec, depth).unwrap(),
            tails: spec
                .replacements()
                .iter()
                .map(|r| {
                    (
                        r.tail().namespace().to_string(),
                        r.tail().sink().to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn random(&self, rng: &mut impl Rng) -> Sym {
        loop {
            match rng.gen_range(0..5) {
                0 => {
                    let v = &self.graph.vertices()[rng.gen_range(0..self.graph.vertex_count())];
                    return Sym::P(v.to_string());
                }
                1 | 2 if self.graph.edge_count() > 0 => {
                    let e = &self.graph.edges()[rng.gen_range(0..self.graph.edge_count())];
                    return if rng.gen_bool(0.5) {
                        Sym::S(e.id.to_string())
                    } else {
                        Sym::SStar(e.id.to_string())
                    };
                }
                3 | 4 if !self.tails.is_empty() => {
                    let (t, _) = &self.tails[rng.gen_range(0..self.tails.len())];
                    return if rng.gen_bool(0.5) {
                        Sym::T(t.clone())
                    } else {
                        Sym::TStar(t.clone())
                    };
                }
                _ => {}
            }
        }
    }

    /// A word biased towards composable neighbours so that products are
    /// not almost always zero.
    pub fn random_word(&self, rng: &mut impl Rng, len: usize, ctx: &dyn CkContext) -> Vec<Sym> {
        let mut word: Vec<Sym> = Vec::new();
        for _ in 0..len {
            let mut pick = self.random(rng);
            for _ in 0..20 {
                match word.last() {
                    Some(prev)
                        if right_vertex(prev, ctx, self) != left_vertex(&pick, ctx, self) =>
                    {
                        pick = self.random(rng);
                    }
                    _ => break,
                }
            }
            word.push(pick);
        }
        word
    }

    pub fn sink(&self, tail: &str) -> String {
        self.tails
            .iter()
            .find(|(t, _)| t == tail)
            .unwrap()
            .1
            .clone()
    }
}

pub fn left_vertex(x: &Sym, ctx: &dyn CkContext, vocab: &Vocabulary) -> String {
    match x {
        Sym::P(v) => v.clone(),
        Sym::S(e) => ctx.endpoints(e).unwrap().1.to_string(),
        Sym::SStar(e) => ctx.endpoints(e).unwrap().0.to_string(),
        Sym::T(t) | Sym::TStar(t) => vocab.sink(t),
    }
}

pub fn right_vertex(x: &Sym, ctx: &dyn CkContext, vocab: &Vocabulary) -> String {
    match x {
        Sym::P(v) => v.clone(),
        Sym::S(e) => ctx.endpoints(e).unwrap().0.to_string(),
        Sym::SStar(e) => ctx.endpoints(e).unwrap().1.to_string(),
        Sym::T(t) | Sym::TStar(t) => vocab.sink(t),
    }
}

/// Applies the rewrite rules to adjacent letters, at positions chosen by
/// `rng`, until none applies. Returns `None` for zero, otherwise the
/// irreducible word with absorbed projections removed.
pub fn oracle_reduce(
    mut word: Vec<Sym>,
    ctx: &dyn CkContext,
    vocab: &Vocabulary,
    rng: &mut impl Rng,
) -> Option<Vec<Sym>> {
    loop {
        let mut candidates = Vec::new();
        for i in 0..word.len().saturating_sub(1) {
            let (a, b) = (&word[i], &word[i + 1]);
            if right_vertex(a, ctx, vocab) != left_vertex(b, ctx, vocab) {
                return None;
            }
            let applies = match (a, b) {
                (Sym::SStar(_), Sym::S(_)) => true,
                (Sym::P(_), _) | (_, Sym::P(_)) => true,
                (Sym::T(x), Sym::TStar(y)) | (Sym::TStar(x), Sym::T(y)) => x == y,
                (Sym::S(e), Sym::SStar(f)) => {
                    e == f && ctx.receiver_count(&left_vertex(a, ctx, vocab)) == Some(1)
                }
                _ => false,
            };
            if applies {
                candidates.push(i);
            }
        }
        let Some(&i) = candidates.get(rng.gen_range(0..candidates.len().max(1))) else {
            return Some(word);
        };
        let (a, b) = (word[i].clone(), word[i + 1].clone());
        let replacement: Vec<Sym> = match (&a, &b) {
            (Sym::SStar(e), Sym::S(f)) => {
                if e != f {
                    return None;
                }
                vec![Sym::P(ctx.endpoints(e).unwrap().0.to_string())]
            }
            (Sym::P(_), _) => vec![b.clone()],
            (_, Sym::P(_)) => vec![a.clone()],
            (Sym::T(t), Sym::TStar(_)) | (Sym::TStar(t), Sym::T(_)) => vec![Sym::P(vocab.sink(t))],
            (Sym::S(e), Sym::SStar(_)) => vec![Sym::P(ctx.endpoints(e).unwrap().1.to_string())],
            _ => unreachable!(),
        };
        word.splice(i..i + 2, replacement);
    }
}

pub fn letters_as_syms(term: &CkTerm) -> Option<Vec<Sym>> {
    if term.is_zero() {
        return None;
    }
    let m = term.as_monomial().expect("a word has one monomial");
    Some(
        m.letters()
            .into_iter()
            .map(|l| match l {
                Letter::P(v) => Sym::P(v.to_string()),
                Letter::S(e) => Sym::S(e.to_string()),
                Letter::SStar(e) => Sym::SStar(e.to_string()),
                Letter::T(t) => Sym::T(t.to_string()),
                Letter::TStar(t) => Sym::TStar(t.to_string()),
            })
            .collect(),
    )
}

pub fn sym_term(x: &Sym, ctx: &dyn CkContext) -> CkTerm {
    match x {
        Sym::P(v) => CkTerm::p(ctx, v),
        Sym::S(e) => CkTerm::s(ctx, e),
        Sym::SStar(e) => CkTerm::s_star(ctx, e),
        Sym::T(t) => CkTerm::t(ctx, t),
        Sym::TStar(t) => CkTerm::t_star(ctx, t),
    }
    .unwrap()
}

/// Left-to-right product.
pub fn word_term(word: &[Sym], ctx: &dyn CkContext) -> CkTerm {
    let mut acc = sym_term(&word[0], ctx);
    for x in &word[1..] {
        acc = acc.multiply(&sym_term(x, ctx), ctx).unwrap();
    }
    acc
}

/// Product with a random bracketing.
pub fn word_term_bracketed(word: &[Sym], ctx: &dyn CkContext, rng: &mut impl Rng) -> CkTerm {
    if word.len() == 1 {
        return sym_term(&word[0], ctx);
    }
    let cut = rng.gen_range(1..word.len());
    let left = word_term_bracketed(&word[..cut], ctx, rng);
    let right = word_term_bracketed(&word[cut..], ctx, rng);
    left.multiply(&right, ctx).unwrap()
}

pub fn random_spec(rng: &mut impl Rng) -> AugmentedGraphSpec {
    let raw = random_condition5_graph(rng, 2);
    embed(&raw.to_graph()).unwrap().0
}

/// A sum of up to three scaled random words with small Gaussian-rational
/// coefficients.
pub fn random_term(
    vocab: &Vocabulary,
    rng: &mut impl Rng,
    ctx: &dyn CkContext,
    max_len: usize,
) -> CkTerm {
    let mut t = CkTerm::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(1..=max_len);
        let w = vocab.random_word(rng, len, ctx);
        let c = &real(rng.gen_range(-3..=3), rng.gen_range(1..=4))
            + &(&real(rng.gen_range(-2..=2), rng.gen_range(1..=3)) * &imag_unit());
        t = &t + &word_term(&w, ctx).scale(&c);
    }
    t
}
