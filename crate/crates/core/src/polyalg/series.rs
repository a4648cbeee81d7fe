use serde::{Deserialize, Serialize};

/// Power series in the formal parameter `h`, truncated after `h^order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSeries<T> {
    coeffs: Vec<T>,
}

impl<T> FormalSeries<T> {
    /// `coeffs[k]` is the coefficient of `h^k`; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty vector.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a formal series needs at least one coefficient");
        FormalSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        FormalSeries::new((0..=order).map(f).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.coeffs.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> FormalSeries<U> {
        FormalSeries::new(self.coeffs.iter().map(f).collect())
    }

    pub fn truncate(&mut self, order: usize) {
        self.coeffs.truncate(order + 1);
    }
}

impl<T> std::ops::Index<usize> for FormalSeries<T> {
    type Output = T;
    fn index(&self, k: usize) -> &T {
        &self.coeffs[k]
    }
}

impl<'a, T> IntoIterator for &'a FormalSeries<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.coeffs.iter()
    }
}
