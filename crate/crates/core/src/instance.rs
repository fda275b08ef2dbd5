use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Exact non-negative vertex weight.
pub type Weight = BigRational;

pub const MAX_COLORS: u32 = 64;

/// Admissible colours of one vertex, a subset of `{1, .., r}` with `r <= 64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ColorList(u64);

impl ColorList {
    pub fn empty() -> Self {
        ColorList(0)
    }

    pub fn full(r: u32) -> Self {
        assert!(r <= MAX_COLORS, "at most {MAX_COLORS} colours are supported");
        if r == 64 {
            ColorList(u64::MAX)
        } else {
            ColorList((1u64 << r) - 1)
        }
    }

    pub fn from_colors<I: IntoIterator<Item = u32>>(colors: I) -> Result<Self> {
        let mut bits = 0u64;
        for c in colors {
            if c == 0 || c > MAX_COLORS {
                return Err(Error::invalid(format!("colour {c} outside 1..={MAX_COLORS}")));
            }
            bits |= 1 << (c - 1);
        }
        Ok(ColorList(bits))
    }

    pub fn contains(&self, color: u32) -> bool {
        (1..=MAX_COLORS).contains(&color) && self.0 >> (color - 1) & 1 == 1
    }

    pub fn colors(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=MAX_COLORS).filter(move |&c| self.contains(c))
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn max_color(&self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }
}

impl fmt::Debug for ColorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.colors()).finish()
    }
}

/// A graph with vertex weights, colour lists and the parameters `r`
/// (number of colours), `k` (the graph is assumed kP3-free) and `d`
/// (distance; 2 for the classical problems).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub weights: Vec<Weight>,
    pub lists: Vec<ColorList>,
    pub r: u32,
    pub k: u32,
    pub d: u32,
}

impl Instance {
    pub fn new(
        graph: Graph,
        weights: Vec<Weight>,
        lists: Vec<ColorList>,
        r: u32,
        k: u32,
        d: u32,
    ) -> Result<Instance> {
        let n = graph.universe();
        if graph.order() != n {
            return Err(Error::invalid("instance graph must use the labels 0..n"));
        }
        if weights.len() != n || lists.len() != n {
            return Err(Error::invalid(format!(
                "expected {n} weights and lists, got {} and {}",
                weights.len(),
                lists.len()
            )));
        }
        if let Some(v) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::invalid(format!("vertex {v} has a negative weight")));
        }
        if r == 0 || r > MAX_COLORS {
            return Err(Error::invalid(format!("r must be in 1..={MAX_COLORS}, got {r}")));
        }
        if let Some(v) = lists.iter().position(|l| l.max_color().is_some_and(|c| c > r)) {
            return Err(Error::invalid(format!("list of vertex {v} uses a colour above r = {r}")));
        }
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if d < 2 {
            return Err(Error::invalid(format!("d must be at least 2, got {d}")));
        }
        Ok(Instance {
            graph,
            weights,
            lists,
            r,
            k,
            d,
        })
    }

    /// Unit weights and full lists.
    pub fn unweighted(graph: Graph, r: u32, k: u32, d: u32) -> Result<Instance> {
        let n = graph.universe();
        Instance::new(
            graph,
            vec![Weight::one(); n],
            vec![ColorList::full(r.min(MAX_COLORS)); n],
            r,
            k,
            d,
        )
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn weight_of(&self, s: &VertexSet) -> Weight {
        total_weight(&self.weights, s)
    }

    pub fn total_weight(&self) -> Weight {
        self.weight_of(self.graph.vertices())
    }
}

pub fn total_weight(weights: &[Weight], s: &VertexSet) -> Weight {
    s.iter().fold(Weight::zero(), |acc, v| acc + &weights[v])
}

/// Scales exact weights to integers by the least common multiple of their
/// denominators.
#[derive(Clone, Debug)]
pub(crate) struct ScaledWeights {
    pub values: Vec<i128>,
    pub scale: BigInt,
}

impl ScaledWeights {
    pub fn new(weights: &[Weight]) -> Result<ScaledWeights> {
        let scale = weights
            .iter()
            .fold(BigInt::one(), |acc, w| num_integer::lcm(acc, w.denom().clone()));
        let mut values = Vec::with_capacity(weights.len());
        let mut total: i128 = 0;
        for w in weights {
            if w.is_negative() {
                return Err(Error::invalid("weights must be non-negative"));
            }
            let scaled = w.numer() * (&scale / w.denom());
            let value = i128::try_from(scaled)
                .map_err(|_| Error::Overflow("scaled weight exceeds 128 bits".into()))?;
            total = total
                .checked_add(value)
                .ok_or_else(|| Error::Overflow("total scaled weight exceeds 128 bits".into()))?;
            values.push(value);
        }
        Ok(ScaledWeights { values, scale })
    }

    pub fn unscale(&self, value: i128) -> Weight {
        BigRational::new(BigInt::from(value), self.scale.clone())
    }
}
