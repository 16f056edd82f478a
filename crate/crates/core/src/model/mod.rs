//! Finite model search.
//!
//! Only the `n * n` membership cells are unknowns: sentences are grounded
//! directly (never clausified), so Skolem functions need no tables. Every
//! model handed back has been re-checked by the independent evaluator.

mod eval;
mod ground;
mod sat;

use std::fmt;

pub use eval::eval;
pub use ground::{cell_var, ground, ground_with_threshold, DEFAULT_DISTRIBUTION_THRESHOLD};
pub use sat::sat_solve;

use crate::comprehension::Sentence;

/// Finite membership structure on elements `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    size: usize,
    membership: Vec<Vec<bool>>,
}

impl Model {
    /// Panics unless `membership` is `size x size` with `size >= 1`.
    pub fn new(size: usize, membership: Vec<Vec<bool>>) -> Model {
        assert!(size >= 1, "models are nonempty");
        assert!(
            membership.len() == size && membership.iter().all(|r| r.len() == size),
            "membership table must be {size}x{size}"
        );
        Model { size, membership }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Whether element `i` is a member of element `j`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.membership[i][j]
    }

    pub fn membership(&self) -> &[Vec<bool>] {
        &self.membership
    }

    /// Every membership table of the given size, in binary counting order.
    pub fn all_of_size(size: usize) -> impl Iterator<Item = Model> {
        let cells = size * size;
        assert!(cells < 64, "enumeration limited to 63 cells");
        (0u64..1 << cells).map(move |bits| {
            let membership = (0..size)
                .map(|i| (0..size).map(|j| bits >> (i * size + j) & 1 == 1).collect())
                .collect();
            Model::new(size, membership)
        })
    }
}

/// `n=<size>` followed by one row of `0`/`1` per element.
impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.size)?;
        for row in &self.membership {
            f.write_str("\n")?;
            for &cell in row {
                f.write_str(if cell { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// CNF over the membership cells (variables `1..=cells`) plus any
/// definitional variables (`cells+1..=variables`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundClauseSet {
    pub cells: usize,
    pub variables: usize,
    pub clauses: Vec<Vec<i32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSearch {
    Found(Model),
    NoneUpTo(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("decoded model of size {size} falsifies input sentence {sentence}; grounding is broken")]
    UnverifiedModel { size: usize, sentence: String },
}

/// Tries domain sizes `min_size..=max_size` in order.
pub fn find_model_in_range(
    sentences: &[Sentence],
    min_size: usize,
    max_size: usize,
) -> Result<ModelSearch, ModelError> {
    for n in min_size.max(1)..=max_size {
        let g = ground(sentences, n);
        if let Some(assignment) = sat_solve(&g) {
            let membership = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| assignment[cell_var(n, i, j) as usize - 1])
                        .collect()
                })
                .collect();
            let model = Model::new(n, membership);
            if let Some(bad) = sentences.iter().find(|s| !eval(s, &model)) {
                return Err(ModelError::UnverifiedModel {
                    size: n,
                    sentence: bad.to_string(),
                });
            }
            return Ok(ModelSearch::Found(model));
        }
    }
    Ok(ModelSearch::NoneUpTo(max_size))
}

/// Smallest model of size at most `max_size`, if any.
pub fn find_model(sentences: &[Sentence], max_size: usize) -> Result<ModelSearch, ModelError> {
    find_model_in_range(sentences, 1, max_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comprehension::{cos_instance, extensionality};
    use crate::formula::{parse, PredicateBody};

    fn cos(text: &str) -> Sentence {
        cos_instance(&PredicateBody::over_x(parse(text).unwrap()).unwrap())
    }

    #[test]
    fn anti_russell_model_at_one() {
        let r = find_model(&[cos("x in x"), extensionality()], 3).unwrap();
        assert_eq!(r, ModelSearch::Found(Model::new(1, vec![vec![false]])));
    }

    #[test]
    fn russell_has_no_small_model() {
        let r = find_model(&[cos("not (x in x)"), extensionality()], 4).unwrap();
        assert_eq!(r, ModelSearch::NoneUpTo(4));
    }

    #[test]
    fn display_format() {
        let m = Model::new(2, vec![vec![false, true], vec![true, false]]);
        assert_eq!(m.to_string(), "n=2\n01\n10");
    }

    #[test]
    fn enumerates_all_tables() {
        assert_eq!(Model::all_of_size(2).count(), 16);
    }
}
