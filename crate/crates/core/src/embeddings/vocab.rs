use std::collections::HashMap;

use crate::{Error, Result};

/// Tokens in frequency order (most frequent first) with a reverse index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Fails with [`Error::DuplicateToken`] (1-based position) on repeats.
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        let mut vocab = Vocabulary {
            tokens: Vec::with_capacity(tokens.len()),
            index: HashMap::with_capacity(tokens.len()),
        };
        for (pos, token) in tokens.into_iter().enumerate() {
            vocab.push(token, pos + 1)?;
        }
        Ok(vocab)
    }

    pub(crate) fn push(&mut self, token: String, line: usize) -> Result<()> {
        if self.index.contains_key(&token) {
            return Err(Error::DuplicateToken { line, token });
        }
        self.index.insert(token.clone(), self.tokens.len());
        self.tokens.push(token);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, i: usize) -> Option<&str> {
        self.tokens.get(i).map(String::as_str)
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    /// Number of tokens present in both vocabularies.
    pub fn shared_count(&self, other: &Vocabulary) -> usize {
        self.tokens.iter().filter(|t| other.contains(t)).count()
    }

    pub(crate) fn select(&self, rows: &[usize]) -> Vocabulary {
        Vocabulary::new(rows.iter().map(|&i| self.tokens[i].clone()).collect())
            .expect("a subset of distinct tokens is distinct")
    }
}
