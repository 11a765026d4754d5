//! Edge and node signals.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

macro_rules! signal_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Vec<f64>);

        impl $name {
            pub fn new(values: Vec<f64>) -> Self {
                Self(values)
            }

            pub fn zeros(len: usize) -> Self {
                Self(vec![0.0; len])
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            /// Euclidean norm.
            pub fn norm(&self) -> f64 {
                crate::linalg::norm(&self.0)
            }

            pub fn dot(&self, other: &Self) -> f64 {
                crate::linalg::dot(&self.0, &other.0)
            }

            pub fn scaled(&self, s: f64) -> Self {
                Self(self.0.iter().map(|v| v * s).collect())
            }

            /// `‖self − other‖₂`.
            pub fn distance(&self, other: &Self) -> f64 {
                crate::linalg::distance(&self.0, &other.0)
            }

            pub fn add(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Deref for $name {
            type Target = [f64];
            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut [f64] {
                &mut self.0
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }

        impl FromIterator<f64> for $name {
            fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
                Self(iter.into_iter().collect())
            }
        }
    };
}

signal_type!(
    /// A flow on the edges of a graph. Entry `e` is signed relative to the
    /// reference orientation of edge `e`: positive values flow tail → head.
    EdgeSignal
);

signal_type!(
    /// A value per node, e.g. node data or a potential.
    NodeSignal
);
