//! Zipper navigation over any term type with ordered children.

mod traversal;

pub use traversal::*;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// Terms whose immediate subterms can be listed and replaced.
///
/// Implementations must satisfy `t.rebuild(i, t.children()[i].clone()) == t`
/// for every `i < t.arity()`.
pub trait Navigable: Sized {
    fn children(&self) -> Vec<Self>;

    /// `self` with its `index`-th child replaced. `index` is below the arity.
    fn rebuild(&self, index: usize, child: Self) -> Self;

    fn arity(&self) -> usize {
        self.children().len()
    }

    fn child(&self, index: usize) -> Option<Self> {
        self.children().into_iter().nth(index)
    }
}

/// Paths of all subterms of `term` in preorder, the root (`[]`) first.
pub fn positions<T: Navigable>(term: &T) -> Vec<Vec<usize>> {
    fn go<T: Navigable>(t: &T, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        for (i, c) in t.children().iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(term, &mut Vec::new(), &mut out);
    out
}

/// Everything the semantics needs from a term type.
pub trait Term: Navigable + Clone + Eq + Ord + Hash + fmt::Debug + 'static {}

impl<T: Navigable + Clone + Eq + Ord + Hash + fmt::Debug + 'static> Term for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NavError {
    #[error("the focus is already at the root")]
    AtRoot,
    #[error("child {index} does not exist; the focus has {arity} children")]
    NoChild { index: usize, arity: usize },
    #[error("there is no sibling in that direction")]
    NoSibling,
}

#[derive(Clone, Debug)]
struct Frame<T> {
    parent: T,
    index: usize,
}

/// A term with a focused subterm.
///
/// The context is a stack of frames, each holding the parent node and the
/// index of the child that was entered. The root term is kept alongside so
/// equality and ordering can compare zippers as (root, path) pairs; its hash
/// is computed once per root, since zippers are used as memo keys.
#[derive(Clone)]
pub struct Zipper<T> {
    root: T,
    root_hash: u64,
    focus: T,
    frames: Vec<Frame<T>>,
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = std::hash::DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

impl<T: Term> Zipper<T> {
    /// Focus on the root of `term`.
    pub fn new(term: T) -> Self {
        Zipper {
            root_hash: hash_of(&term),
            root: term.clone(),
            focus: term,
            frames: Vec::new(),
        }
    }

    /// Focus on the subterm of `term` at `path`.
    pub fn at_path(term: T, path: &[usize]) -> Result<Self, NavError> {
        path.iter().try_fold(Zipper::new(term), |z, &i| z.down(i))
    }

    pub fn focus(&self) -> &T {
        &self.focus
    }

    /// The whole term, with the focus plugged back into its context.
    pub fn unfocus(&self) -> &T {
        &self.root
    }

    /// Child indices from the root to the focus.
    pub fn path(&self) -> Vec<usize> {
        self.frames.iter().map(|f| f.index).collect()
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    pub fn is_root(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn up(&self) -> Result<Self, NavError> {
        let (last, rest) = self.frames.split_last().ok_or(NavError::AtRoot)?;
        Ok(Zipper {
            root: self.root.clone(),
            root_hash: self.root_hash,
            focus: last.parent.rebuild(last.index, self.focus.clone()),
            frames: rest.to_vec(),
        })
    }

    pub fn down(&self, index: usize) -> Result<Self, NavError> {
        let arity = self.focus.arity();
        let child = self
            .focus
            .child(index)
            .ok_or(NavError::NoChild { index, arity })?;
        let mut frames = self.frames.clone();
        frames.push(Frame {
            parent: self.focus.clone(),
            index,
        });
        Ok(Zipper {
            root: self.root.clone(),
            root_hash: self.root_hash,
            focus: child,
            frames,
        })
    }

    /// One zipper per child of the focus, in ascending index order.
    pub fn downs(&self) -> Vec<Self> {
        (0..self.focus.arity())
            .filter_map(|i| self.down(i).ok())
            .collect()
    }

    pub fn left(&self) -> Result<Self, NavError> {
        let index = self.frames.last().ok_or(NavError::AtRoot)?.index;
        if index == 0 {
            return Err(NavError::NoSibling);
        }
        self.up()?.down(index - 1).map_err(|_| NavError::NoSibling)
    }

    pub fn right(&self) -> Result<Self, NavError> {
        let index = self.frames.last().ok_or(NavError::AtRoot)?.index;
        self.up()?.down(index + 1).map_err(|_| NavError::NoSibling)
    }

    pub fn to_root(&self) -> Self {
        Zipper::new(self.root.clone())
    }

    /// Replaces the focused subterm, keeping the context.
    pub fn replace(&self, focus: T) -> Self {
        let mut root = focus.clone();
        for frame in self.frames.iter().rev() {
            root = frame.parent.rebuild(frame.index, root);
        }
        Zipper {
            root_hash: hash_of(&root),
            root,
            focus,
            frames: self.frames.clone(),
        }
    }
}

impl<T: Term> PartialEq for Zipper<T> {
    fn eq(&self, other: &Self) -> bool {
        self.root_hash == other.root_hash
            && self.frames.len() == other.frames.len()
            && self
                .frames
                .iter()
                .zip(&other.frames)
                .all(|(a, b)| a.index == b.index)
            && self.root == other.root
    }
}

impl<T: Term> Eq for Zipper<T> {}

impl<T: Term> Hash for Zipper<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.root_hash);
        for f in &self.frames {
            f.index.hash(state);
        }
    }
}

impl<T: Term> PartialOrd for Zipper<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Term> Ord for Zipper<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.root
            .cmp(&other.root)
            .then_with(|| self.path().cmp(&other.path()))
    }
}

impl<T: Term> fmt::Debug for Zipper<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Zipper")
            .field("root", &self.root)
            .field("path", &self.path())
            .finish()
    }
}
