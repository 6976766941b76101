//! Goodness values and knowledge points.

/// Evaluated goodness `<F_OBJ, F_CON>`: objective value plus aggregate
/// constraint violation. `f_con` is never negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodnessPair {
    pub f_obj: f64,
    pub f_con: f64,
}

impl GoodnessPair {
    pub fn new(f_obj: f64, f_con: f64) -> Self {
        debug_assert!(f_con >= 0.0, "negative constraint violation {f_con}");
        Self { f_obj, f_con }
    }

    pub fn feasible(f_obj: f64) -> Self {
        Self { f_obj, f_con: 0.0 }
    }

    pub fn is_feasible(&self) -> bool {
        self.f_con == 0.0
    }
}

/// Result of comparing two goodness values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    /// The first argument is at least as good as the second.
    FirstBetterOrEqual,
    SecondBetter,
}

impl Preference {
    pub fn first_wins(self) -> bool {
        matches!(self, Preference::FirstBetterOrEqual)
    }
}

/// A candidate point with its goodness, evaluated at the point's in-box image.
/// `x` is the point as generated; it may lie outside the search box.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgePoint {
    pub x: Vec<f64>,
    pub goodness: GoodnessPair,
}

impl KnowledgePoint {
    pub fn new(x: Vec<f64>, goodness: GoodnessPair) -> Self {
        Self { x, goodness }
    }
}
