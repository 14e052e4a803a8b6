use std::collections::HashMap;

use thiserror::Error;

use crate::lasso::{LassoWord, MAX_PROPOSITIONS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("at most {MAX_PROPOSITIONS} propositions are supported, got {0}")]
    TooManyPropositions(usize),
    #[error("proposition `{0}` is declared twice")]
    DuplicateProposition(String),
    #[error("{class} word {index} uses a proposition outside the declared universe")]
    UndeclaredProposition { class: &'static str, index: usize },
    #[error("positive word {positive} and negative word {negative} denote the same infinite word")]
    Overlap { positive: usize, negative: usize },
}

/// Ordered proposition universe; symbol bit `i` is proposition `names[i]`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Propositions {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Propositions {
    pub fn new<I, S>(names: I) -> Result<Self, SampleError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut props = Propositions::default();
        for name in names {
            props.push(name.into())?;
        }
        Ok(props)
    }

    pub fn push(&mut self, name: String) -> Result<usize, SampleError> {
        if self.index.contains_key(&name) {
            return Err(SampleError::DuplicateProposition(name));
        }
        if self.names.len() == MAX_PROPOSITIONS {
            return Err(SampleError::TooManyPropositions(self.names.len() + 1));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Disjoint positive and negative lasso words over one universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sample {
    props: Propositions,
    positives: Vec<LassoWord>,
    negatives: Vec<LassoWord>,
}

impl Sample {
    pub fn new(props: Propositions, positives: Vec<LassoWord>, negatives: Vec<LassoWord>) -> Result<Self, SampleError> {
        let width = props.len();
        for (class, words) in [("positive", &positives), ("negative", &negatives)] {
            if let Some(index) = words.iter().position(|w| w.support().width() > width) {
                return Err(SampleError::UndeclaredProposition { class, index });
            }
        }
        let canon_pos: HashMap<LassoWord, usize> =
            positives.iter().enumerate().rev().map(|(i, w)| (w.canonicalize(), i)).collect();
        for (negative, w) in negatives.iter().enumerate() {
            if let Some(&positive) = canon_pos.get(&w.canonicalize()) {
                return Err(SampleError::Overlap { positive, negative });
            }
        }
        Ok(Sample { props, positives, negatives })
    }

    pub fn props(&self) -> &Propositions {
        &self.props
    }

    pub fn positives(&self) -> &[LassoWord] {
        &self.positives
    }

    pub fn negatives(&self) -> &[LassoWord] {
        &self.negatives
    }

    /// Positives followed by negatives; the index used by encodings.
    pub fn words(&self) -> impl Iterator<Item = (Polarity, &LassoWord)> {
        self.positives
            .iter()
            .map(|w| (Polarity::Positive, w))
            .chain(self.negatives.iter().map(|w| (Polarity::Negative, w)))
    }

    pub fn word_count(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word_count() == 0
    }

    /// `|S| = Σ |uv|`.
    pub fn size(&self) -> usize {
        self.words().map(|(_, w)| w.len()).sum()
    }
}
