//! Generalized Cartan matrices: validation, genericity, symmetrizability and
//! principal submatrices.
//!
//! Indices in the Rust API are 0-based. Everything user-facing (error
//! messages, JSON, witness cycles in text form) is 1-based to match the
//! usual `a_ij` notation.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::json::{big_to_json, rational_to_json};
use crate::series::Rational;

/// Validation and lookup failures. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("declared n = {declared} but {actual} rows were given")]
    RankMismatch { declared: usize, actual: usize },
    #[error("diagonal entry at ({i},{i}) is {value}, expected 2")]
    DiagonalNotTwo { i: usize, value: BigInt },
    #[error("positive off-diagonal at ({i},{j})")]
    PositiveOffDiagonal { i: usize, j: usize },
    #[error("zero-pairing violated at ({i},{j})")]
    ZeroPairing { i: usize, j: usize },
    #[error("index set must be nonempty")]
    EmptyIndexSet,
    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {index} listed twice")]
    DuplicateIndex { index: usize },
    #[error("rank {n} is below the required minimum {required}")]
    RankTooSmall { n: usize, required: usize },
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

/// An `n x n` integer matrix with `a_ii = 2`, `a_ij <= 0` off the diagonal
/// and `a_ij = 0` exactly when `a_ji = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    entries: Vec<Vec<BigInt>>,
}

/// `A = DB` with `D = diag(d)` positive and `B` symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetrization {
    pub d: Vec<Rational>,
    pub b: Vec<Vec<Rational>>,
}

/// A simple cycle along which the ratios `a_ij / a_ji` do not multiply to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotSymmetrizable {
    /// 0-based vertex sequence `i_1, ..., i_k`; the closing edge is implied.
    pub cycle: Vec<usize>,
    /// `a_{i1 i2} a_{i2 i3} ... a_{ik i1}`
    pub forward: BigInt,
    /// `a_{i2 i1} a_{i3 i2} ... a_{i1 ik}`
    pub backward: BigInt,
}

impl fmt::Display for NotSymmetrizable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.cycle.iter().map(|i| (i + 1).to_string()).collect();
        write!(
            f,
            "not symmetrizable: cycle ({}) with products {} != {}",
            names.join(","),
            self.forward,
            self.backward
        )
    }
}

/// `ε(A)`, the rank of the odd rational homotopy of `G(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epsilon {
    /// Non-symmetrizable generic matrix.
    Zero,
    /// Symmetrizable generic matrix.
    One,
}

impl Epsilon {
    pub fn value(self) -> u32 {
        match self {
            Epsilon::Zero => 0,
            Epsilon::One => 1,
        }
    }

    pub fn from_value(v: u32) -> Option<Self> {
        match v {
            0 => Some(Epsilon::Zero),
            1 => Some(Epsilon::One),
            _ => None,
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub rank: usize,
    pub generic: bool,
    pub symmetrizable: bool,
    pub symmetrization: Option<Symmetrization>,
    pub witness: Option<NotSymmetrizable>,
    pub indecomposable: bool,
    /// `None` outside the generic, rank >= 2 regime.
    pub epsilon: Option<Epsilon>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        let symmetrization = match &self.symmetrization {
            Some(s) => json!({
                "d": s.d.iter().map(rational_to_json).collect::<Vec<_>>(),
                "b": s.b.iter()
                    .map(|row| row.iter().map(rational_to_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
            None => Value::Null,
        };
        let witness = match &self.witness {
            Some(w) => json!({
                "cycle": w.cycle.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "forward": big_to_json(&w.forward),
                "backward": big_to_json(&w.backward),
            }),
            None => Value::Null,
        };
        json!({
            "n": self.rank,
            "generic": self.generic,
            "symmetrizable": self.symmetrizable,
            "symmetrization": symmetrization,
            "witness": witness,
            "indecomposable": self.indecomposable,
            "epsilon": match self.epsilon {
                Some(e) => json!(e.value()),
                None => json!("undefined"),
            },
        })
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank:           {}", self.rank)?;
        writeln!(f, "generic:        {}", self.generic)?;
        writeln!(f, "indecomposable: {}", self.indecomposable)?;
        writeln!(f, "symmetrizable:  {}", self.symmetrizable)?;
        if let Some(s) = &self.symmetrization {
            let d: Vec<String> = s.d.iter().map(ToString::to_string).collect();
            writeln!(f, "  D = diag({})", d.join(", "))?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "  {w}")?;
        }
        match self.epsilon {
            Some(e) => write!(f, "epsilon:        {e}"),
            None => write!(f, "epsilon:        undefined"),
        }
    }
}

impl CartanMatrix {
    /// Checks the three Cartan axioms, scanning entries in row-major order
    /// and reporting the first violation.
    pub fn validate(raw: Vec<Vec<BigInt>>) -> Result<Self, CartanError> {
        let n = raw.len();
        if n == 0 {
            return Err(CartanError::Empty);
        }
        if let Some((row, r)) = raw.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(CartanError::NotSquare {
                row: row + 1,
                len: r.len(),
                n,
            });
        }
        let two = BigInt::from(2);
        for i in 0..n {
            for j in 0..n {
                let a = &raw[i][j];
                if i == j {
                    if *a != two {
                        return Err(CartanError::DiagonalNotTwo {
                            i: i + 1,
                            value: a.clone(),
                        });
                    }
                } else if a.is_positive() {
                    return Err(CartanError::PositiveOffDiagonal { i: i + 1, j: j + 1 });
                } else if a.is_zero() && !raw[j][i].is_zero() {
                    return Err(CartanError::ZeroPairing { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(CartanMatrix { entries: raw })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, CartanError> {
        Self::validate(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Parses the interchange format `{"n": 3, "entries": [[2,-1,...], ...]}`.
    pub fn from_json(value: &Value) -> Result<Self, CartanError> {
        let obj = value
            .as_object()
            .ok_or_else(|| CartanError::Json("expected an object".into()))?;
        let rows = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| CartanError::Json("missing \"entries\" array".into()))?;
        let entries = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| CartanError::Json("each row must be an array".into()))?
                    .iter()
                    .map(|x| match x {
                        Value::Number(num) => BigInt::from_str(&num.to_string())
                            .map_err(|_| CartanError::Json(format!("entry {num} is not an integer"))),
                        other => Err(CartanError::Json(format!("entry {other} is not an integer"))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(declared) = obj.get("n") {
            let declared = declared
                .as_u64()
                .ok_or_else(|| CartanError::Json("\"n\" must be a nonnegative integer".into()))?
                as usize;
            if declared != entries.len() {
                return Err(CartanError::RankMismatch {
                    declared,
                    actual: entries.len(),
                });
            }
        } else {
            return Err(CartanError::Json("missing \"n\"".into()));
        }
        Self::validate(entries)
    }

    pub fn from_json_str(text: &str) -> Result<Self, CartanError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CartanError::Json(e.to_string()))?;
        Self::from_json(&value)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.rank(),
            "entries": self.entries.iter()
                .map(|row| row.iter().map(big_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// `a_ij a_ji >= 4` for every pair `i != j`.
    pub fn is_generic(&self) -> bool {
        let four = BigInt::from(4);
        let n = self.rank();
        (0..n).all(|i| (i + 1..n).all(|j| &self.entries[i][j] * &self.entries[j][i] >= four))
    }

    /// Components of the graph on `0..n` with an edge wherever `a_ij != 0`,
    /// each listed in BFS order from its least vertex, together with the
    /// BFS parent of every vertex.
    fn components(&self) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut parent = vec![None; n];
        let mut comps = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut order = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if j != i && !seen[j] && !self.entries[i][j].is_zero() {
                        seen[j] = true;
                        parent[j] = Some(i);
                        order.push(j);
                        queue.push_back(j);
                    }
                }
            }
            comps.push(order);
        }
        (comps, parent)
    }

    /// Connected nonzero-entry graph; a direct-sum splitting under
    /// simultaneous row/column permutation is exactly a disconnection.
    pub fn is_indecomposable(&self) -> bool {
        self.components().0.len() == 1
    }

    /// Finds `D`, `B` with `A = DB` by propagating `d_j = d_i a_ji / a_ij`
    /// along a BFS spanning forest (with `d = 1` at the least index of each
    /// component) and checking every non-tree edge.
    pub fn symmetrize(&self) -> Result<Symmetrization, NotSymmetrizable> {
        let n = self.rank();
        let (comps, parent) = self.components();
        let mut d: Vec<Rational> = vec![Rational::one(); n];
        for comp in &comps {
            for &j in &comp[1..] {
                let i = parent[j].expect("non-root vertex has a parent");
                d[j] = &d[i]
                    * Rational::new(self.entries[j][i].clone(), self.entries[i][j].clone());
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.entries[i][j].is_zero()
                    || parent[j] == Some(i)
                    || parent[i] == Some(j)
                {
                    continue;
                }
                // a_ij / d_i == a_ji / d_j
                let lhs = Rational::from_integer(self.entries[i][j].clone()) * &d[j];
                let rhs = Rational::from_integer(self.entries[j][i].clone()) * &d[i];
                if lhs != rhs {
                    return Err(self.witness_cycle(&parent, i, j));
                }
            }
        }
        let b = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Rational::from_integer(self.entries[i][j].clone()) / &d[i])
                    .collect()
            })
            .collect();
        Ok(Symmetrization { d, b })
    }

    /// Tree path `lca -> ... -> i`, edge `i -> j`, tree path `j -> ... -> lca`.
    fn witness_cycle(&self, parent: &[Option<usize>], i: usize, j: usize) -> NotSymmetrizable {
        let ancestors = |mut v: usize| {
            let mut path = vec![v];
            while let Some(p) = parent[v] {
                path.push(p);
                v = p;
            }
            path
        };
        let up_i = ancestors(i);
        let up_j = ancestors(j);
        let lca = *up_i
            .iter()
            .find(|v| up_j.contains(v))
            .expect("vertices of one component share a root");
        let mut cycle: Vec<usize> = up_i.iter().take_while(|&&v| v != lca).copied().collect();
        cycle.push(lca);
        cycle.reverse();
        cycle.extend(up_j.iter().take_while(|&&v| v != lca));
        let k = cycle.len();
        let forward = (0..k)
            .map(|t| &self.entries[cycle[t]][cycle[(t + 1) % k]])
            .product();
        let backward = (0..k)
            .map(|t| &self.entries[cycle[(t + 1) % k]][cycle[t]])
            .product();
        NotSymmetrizable {
            cycle,
            forward,
            backward,
        }
    }

    pub fn is_symmetrizable(&self) -> bool {
        self.symmetrize().is_ok()
    }

    /// `A_I = (a_ij)_{i,j in I}` for a nonempty 0-based index list, kept in
    /// the order given.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<CartanMatrix, CartanError> {
        if indices.is_empty() {
            return Err(CartanError::EmptyIndexSet);
        }
        let n = self.rank();
        let mut seen = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(CartanError::IndexOutOfRange { index: i + 1, n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(CartanError::DuplicateIndex { index: i + 1 });
            }
        }
        let entries = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        Self::validate(entries)
    }

    /// Simultaneous row/column permutation: row `k` of the result is row
    /// `perm[k]` of `self`. Use it to move a non-symmetrizable triple into
    /// the leading block before running the rank induction.
    pub fn permute(&self, perm: &[usize]) -> Result<CartanMatrix, CartanError> {
        if perm.len() != self.rank() {
            return Err(CartanError::RankMismatch {
                declared: perm.len(),
                actual: self.rank(),
            });
        }
        self.principal_submatrix(perm)
    }

    /// Lexicographically least `i < j < k` (0-based) with
    /// `a_ij a_jk a_ki != a_ik a_kj a_ji`.
    pub fn find_nonsymmetrizable_triple(
        &self,
    ) -> Result<Option<(usize, usize, usize)>, CartanError> {
        let n = self.rank();
        if n < 3 {
            return Err(CartanError::RankTooSmall { n, required: 3 });
        }
        let a = &self.entries;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let forward = &a[i][j] * &a[j][k] * &a[k][i];
                    let backward = &a[i][k] * &a[k][j] * &a[j][i];
                    if forward != backward {
                        return Ok(Some((i, j, k)));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn epsilon(&self) -> Option<Epsilon> {
        self.classify().epsilon
    }

    pub fn classify(&self) -> ClassificationReport {
        let generic = self.is_generic();
        let (symmetrization, witness) = match self.symmetrize() {
            Ok(s) => (Some(s), None),
            Err(w) => (None, Some(w)),
        };
        let symmetrizable = symmetrization.is_some();
        let epsilon = (generic && self.rank() >= 2).then_some(if symmetrizable {
            Epsilon::One
        } else {
            Epsilon::Zero
        });
        ClassificationReport {
            rank: self.rank(),
            generic,
            symmetrizable,
            symmetrization,
            witness,
            indecomposable: self.is_indecomposable(),
            epsilon,
        }
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
