//! Expression trees evaluated by direct action on basis states.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{add_term, axpy, Model, State, Vector};
use crate::coefficients::Scalar;
use crate::ncalg::{Family, GeneratorId, Kind, Letter, OpBuilder};
use crate::Error;

#[derive(Debug)]
enum Expr<T> {
    Gen(GeneratorId),
    Const(T),
    Add(Vec<Node<T>>),
    Mul(Node<T>, Node<T>),
    Scale(T, Node<T>),
}

#[derive(Debug)]
struct Inner<T> {
    expr: Expr<T>,
    /// Upper bound on lowering letters in any word of the expansion.
    lower: u32,
}

/// Shared, immutable operator expression.
#[derive(Debug)]
pub struct Node<T>(Arc<Inner<T>>);

impl<T> Clone for Node<T> {
    fn clone(&self) -> Self {
        Node(self.0.clone())
    }
}

impl<T: Scalar> Node<T> {
    fn new(expr: Expr<T>) -> Self {
        let lower = match &expr {
            Expr::Gen(g) => u32::from(g.kind.is_lowering()),
            Expr::Const(_) => 0,
            Expr::Add(xs) => xs.iter().map(|x| x.0.lower).max().unwrap_or(0),
            Expr::Mul(a, b) => a.0.lower + b.0.lower,
            Expr::Scale(_, a) => a.0.lower,
        };
        Node(Arc::new(Inner { expr, lower }))
    }

    /// Structural bound on the lowering degree; normal ordering never
    /// increases it, so it bounds that of the normal form too.
    pub fn lowering_bound(&self) -> u32 {
        self.0.lower
    }

    fn is_zero_const(&self) -> bool {
        matches!(&self.0.expr, Expr::Const(c) if c.is_zero())
    }

    fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
}

/// Builds expression trees instead of normal forms.
#[derive(Clone, Debug)]
pub struct OracleBuilder<T> {
    family: Family,
    modes: usize,
    v: Option<T>,
}

impl<T: Scalar> OracleBuilder<T> {
    pub fn new(model: &Model<T>) -> Self {
        OracleBuilder { family: model.family(), modes: model.modes(), v: model.v().cloned() }
    }
}

impl<T: Scalar> OpBuilder<T> for OracleBuilder<T> {
    type Op = Node<T>;

    fn family(&self) -> Family {
        self.family
    }

    fn modes(&self) -> usize {
        self.modes
    }

    fn v(&self) -> Option<T> {
        self.v.clone()
    }

    fn gen(&self, kind: Kind, mode: usize) -> Result<Node<T>, Error> {
        if kind.family() != self.family || mode == 0 || mode > self.modes {
            return Err(Error::InvalidIndex(format!("generator {kind:?}{mode} outside {:?}/{}", self.family, self.modes)));
        }
        Ok(Node::new(Expr::Gen(GeneratorId::new(kind, mode))))
    }

    fn constant(&self, c: T) -> Node<T> {
        Node::new(Expr::Const(c))
    }

    fn add(&self, a: &Node<T>, b: &Node<T>) -> Node<T> {
        if a.is_zero_const() {
            return b.clone();
        }
        if b.is_zero_const() {
            return a.clone();
        }
        // Flatten left-nested sums so long folds stay shallow.
        let mut items = match &a.0.expr {
            Expr::Add(xs) => xs.clone(),
            _ => vec![a.clone()],
        };
        items.push(b.clone());
        Node::new(Expr::Add(items))
    }

    fn mul(&self, a: &Node<T>, b: &Node<T>) -> Node<T> {
        if a.is_zero_const() || b.is_zero_const() {
            return self.zero();
        }
        Node::new(Expr::Mul(a.clone(), b.clone()))
    }

    fn scale(&self, a: &Node<T>, c: &T) -> Node<T> {
        if c.is_zero() {
            return self.zero();
        }
        if c.is_one() {
            return a.clone();
        }
        Node::new(Expr::Scale(c.clone(), a.clone()))
    }
}

/// Applies trees to basis states, memoizing images per node and state.
pub struct Evaluator<'a, T> {
    model: &'a Model<T>,
    cache: FxHashMap<(usize, State), Arc<Vector<T>>>,
    cached_terms: usize,
}

/// Memo size (total stored vector entries) beyond which the cache is reset.
const CACHE_LIMIT: usize = 4_000_000;

impl<'a, T: Scalar> Evaluator<'a, T> {
    pub fn new(model: &'a Model<T>) -> Self {
        Evaluator { model, cache: FxHashMap::default(), cached_terms: 0 }
    }

    pub fn apply_state(&mut self, node: &Node<T>, s: &State) -> Arc<Vector<T>> {
        let key = (node.id(), s.clone());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let out = match &node.0.expr {
            Expr::Gen(g) => {
                let mut v = Vector::default();
                if let Some((t, c)) = self.model.act(Letter::new(*g, 1), s) {
                    add_term(&mut v, &t, c);
                }
                v
            }
            Expr::Const(c) => {
                let mut v = Vector::default();
                add_term(&mut v, s, c.clone());
                v
            }
            Expr::Add(xs) => {
                let mut v = Vector::default();
                for x in xs {
                    let w = self.apply_state(x, s);
                    axpy(&mut v, &T::one(), &w);
                }
                v
            }
            Expr::Mul(a, b) => {
                let inner = self.apply_state(b, s);
                self.apply_vector(a, &inner)
            }
            Expr::Scale(c, a) => {
                let w = self.apply_state(a, s);
                w.iter().map(|(t, x)| (t.clone(), c.field_mul(x))).collect()
            }
        };
        // Generators and constants are cheap to recompute.
        if matches!(node.0.expr, Expr::Gen(_) | Expr::Const(_)) {
            return Arc::new(out);
        }
        if self.cached_terms + out.len() > CACHE_LIMIT {
            self.cache.clear();
            self.cached_terms = 0;
        }
        self.cached_terms += out.len() + 1;
        let out = Arc::new(out);
        self.cache.insert(key, out.clone());
        out
    }

    pub fn apply_vector(&mut self, node: &Node<T>, v: &Vector<T>) -> Vector<T> {
        let mut acc = Vector::default();
        for (s, x) in v {
            let w = self.apply_state(node, s);
            axpy(&mut acc, x, &w);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Rat;
    use crate::fock_oracle::tree_is_zero;

    #[test]
    fn canonical_commutation_on_polynomials() {
        let model = Model::<Rat>::weyl(2);
        let b = OracleBuilder::new(&model);
        let a = b.gen(Kind::Annihilate, 1).unwrap();
        let ad = b.gen(Kind::Create, 1).unwrap();
        let ccr = b.sub(&b.comm(&a, &ad), &b.one());
        assert_eq!(ccr.lowering_bound(), 1);
        assert!(tree_is_zero(&ccr, &model, None).unwrap().is_zero);
        let wrong = b.comm(&a, &ad);
        assert!(!tree_is_zero(&wrong, &model, None).unwrap().is_zero);
        assert!(tree_is_zero(&ccr, &model, Some(2)).is_err());
    }
}
