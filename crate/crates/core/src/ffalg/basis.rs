use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type Labeler = Arc<dyn Fn(usize) -> String + Send + Sync>;

enum Node {
    Indexed,
    Labeled(Vec<String>),
    Generated(Labeler),
    Tensor(Basis, Basis),
    Sum(Vec<Basis>),
    Tagged(String, Basis),
}

/// An ordered basis of a finite-dimensional space. Labels are produced on
/// demand so that large evaluated spaces carry no string storage.
#[derive(Clone)]
pub struct Basis {
    len: usize,
    node: Arc<Node>,
}

impl Basis {
    pub fn indexed(n: usize) -> Self {
        Basis { len: n, node: Arc::new(Node::Indexed) }
    }

    pub fn labeled(labels: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Dimension(format!("duplicate basis label {l}")));
            }
        }
        Ok(Basis { len: labels.len(), node: Arc::new(Node::Labeled(labels)) })
    }

    pub fn generated(n: usize, f: impl Fn(usize) -> String + Send + Sync + 'static) -> Self {
        Basis { len: n, node: Arc::new(Node::Generated(Arc::new(f))) }
    }

    pub fn tensor(a: &Basis, b: &Basis) -> Self {
        Basis { len: a.len * b.len, node: Arc::new(Node::Tensor(a.clone(), b.clone())) }
    }

    pub fn sum(parts: Vec<Basis>) -> Self {
        Basis { len: parts.iter().map(|b| b.len).sum(), node: Arc::new(Node::Sum(parts)) }
    }

    pub fn tagged(tag: impl Into<String>, b: &Basis) -> Self {
        Basis { len: b.len, node: Arc::new(Node::Tagged(tag.into(), b.clone())) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn label(&self, i: usize) -> String {
        assert!(i < self.len, "basis index {i} out of range {}", self.len);
        match &*self.node {
            Node::Indexed => format!("e{i}"),
            Node::Labeled(v) => v[i].clone(),
            Node::Generated(f) => f(i),
            Node::Tensor(a, b) => format!("{}⊗{}", a.label(i / b.len), b.label(i % b.len)),
            Node::Sum(parts) => {
                let mut j = i;
                for (k, part) in parts.iter().enumerate() {
                    if j < part.len {
                        return format!("[{k}]{}", part.label(j));
                    }
                    j -= part.len;
                }
                unreachable!()
            }
            Node::Tagged(t, b) => format!("{t}:{}", b.label(i)),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len).map(|i| self.label(i)).collect()
    }

    /// Summand bases when this basis is a direct sum.
    pub fn summands(&self) -> Option<&[Basis]> {
        match &*self.node {
            Node::Sum(parts) => Some(parts),
            _ => None,
        }
    }

    pub fn tag(&self) -> Option<&str> {
        match &*self.node {
            Node::Tagged(t, _) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 8 {
            f.debug_list().entries(self.labels()).finish()
        } else {
            write!(f, "Basis(len {})", self.len)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_and_sum_labels_are_unique() {
        let a = Basis::labeled(vec!["x".into(), "y".into()]).unwrap();
        let t = Basis::tensor(&a, &a);
        let s = Basis::sum(vec![t.clone(), Basis::tagged("T'", &t)]);
        let labels: HashSet<String> = s.labels().into_iter().collect();
        assert_eq!(labels.len(), 8);
        assert_eq!(t.label(1), "x⊗y");
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(Basis::labeled(vec!["a".into(), "a".into()]).is_err());
    }
}
