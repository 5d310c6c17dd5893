//! Worst-case GPI-distance bounds for compositions of approximated unitaries.
//!
//! Given per-component distances `eps_i = D_P(U_i, V_i)`, four bounds on the
//! distance of the composite are provided:
//!
//! - [`tensor_bound`]: `sqrt(1 - prod(1 - eps_i^2))` for tensor products;
//! - [`mult_bound_pair`] / [`mult_bound_exact`]: the two-factor operator
//!   product bound and its iterated fold over longer products;
//! - [`mult_bound_approx1`]: a prefix-sum approximation of the fold that
//!   avoids the iteration;
//! - [`mult_bound_approx2`]: `c * tensor_bound`, a compact overestimate valid
//!   for long products (it can exceed the exact fold when the number of
//!   factors is below roughly `c^2`);
//!
//! plus the raw [`sum_bound`] that all of them improve on, and
//! [`compose_tree_bound`] which evaluates a nested product/tensor tree of
//! error-annotated leaves with any of the methods.

use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Errors from the bound evaluators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComposeError {
    /// An error list was empty.
    #[error("error list is empty")]
    EmptyList,
    /// A component error was outside `[0, 1)`.
    #[error("eps value {value} outside [0, 1)")]
    EpsRange {
        /// The offending value.
        value: f64,
    },
    /// The approximation constant was not positive and finite.
    #[error("approximation constant c = {c} must be positive and finite")]
    BadC {
        /// The offending value.
        c: f64,
    },
}

fn check_eps_list(eps: &[f64]) -> Result<(), ComposeError> {
    if eps.is_empty() {
        return Err(ComposeError::EmptyList);
    }
    for &e in eps {
        if !(0.0..1.0).contains(&e) || !e.is_finite() {
            return Err(ComposeError::EpsRange { value: e });
        }
    }
    Ok(())
}

/// `sqrt(1 - prod(1 - eps_i^2))`, valid when the components combine as a
/// tensor product. Strictly below [`sum_bound`] whenever at least two entries
/// are positive, and equal to the single entry for one-element lists.
pub fn tensor_bound(eps: &[f64]) -> Result<f64, ComposeError> {
    check_eps_list(eps)?;
    Ok(tensor_bound_unchecked(eps))
}

fn tensor_bound_unchecked(eps: &[f64]) -> f64 {
    let complement = eps.iter().fold(0.0_f64, |s, &e| s + (1.0 - s) * e * e);
    complement.min(1.0).sqrt()
}

/// Two-factor operator-product bound
/// `min{1, sqrt(1 - (1-e1^2)(1-e2^2) + 2 e1 e2 sqrt((1-e1^2/2)(1-e2^2/2)))}`.
///
/// Strictly below `e1 + e2` whenever both inputs are positive.
pub fn mult_bound_pair(e1: f64, e2: f64) -> Result<f64, ComposeError> {
    check_eps_list(&[e1, e2])?;
    Ok(pair_step(e1, e2))
}

/// The pair bound with the accumulator allowed to sit at the clamp value 1.
pub(crate) fn pair_step(b: f64, e: f64) -> f64 {
    let bb = b * b;
    let ee = e * e;
    let radicand =
        bb + ee - bb * ee + 2.0 * b * e * ((1.0 - bb / 2.0) * (1.0 - ee / 2.0)).sqrt();
    radicand.max(0.0).sqrt().min(1.0)
}

/// Iterated pair bound over a product of `m` factors: the left fold
/// `b_1 = eps_1`, `b_k = mult_bound_pair(b_{k-1}, eps_k)` in execution order.
pub fn mult_bound_exact(eps: &[f64]) -> Result<f64, ComposeError> {
    check_eps_list(eps)?;
    Ok(eps[1..].iter().fold(eps[0], |b, &e| pair_step(b, e)))
}

/// Closed-form approximation of [`mult_bound_exact`]:
/// `min{1, sqrt(sum eps_i^2 + 2 sum_{i>=2} eps_i P_i sqrt(max{0, 1 - eps_i^2 - P_i^2}))}`
/// where `P_i = eps_1 + ... + eps_{i-1}`.
///
/// Tracks the exact fold to within 1% while the total error mass
/// `sum eps_i` stays below roughly 0.45, and drifts below it beyond that.
pub fn mult_bound_approx1(eps: &[f64]) -> Result<f64, ComposeError> {
    check_eps_list(eps)?;
    Ok(approx1_unchecked(eps))
}

fn approx1_unchecked(eps: &[f64]) -> f64 {
    let mut s: f64 = eps.iter().map(|e| e * e).sum();
    let mut prefix = eps[0];
    for &e in &eps[1..] {
        s += 2.0 * e * prefix * (1.0 - e * e - prefix * prefix).max(0.0).sqrt();
        prefix += e;
    }
    s.max(0.0).sqrt().min(1.0)
}

/// Compact product bound `min{1, c * tensor_bound(eps)}`.
///
/// With the conventional `c = 7.5` this is a valid overestimate for long
/// products but can exceed [`mult_bound_exact`] when the factor count is
/// below about `c^2`.
pub fn mult_bound_approx2(eps: &[f64], c: f64) -> Result<f64, ComposeError> {
    check_eps_list(eps)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(ComposeError::BadC { c });
    }
    Ok((c * tensor_bound_unchecked(eps)).min(1.0))
}

/// Raw sum of the component errors, reported unclamped for comparison plots.
pub fn sum_bound(eps: &[f64]) -> f64 {
    eps.iter().sum()
}

/// Product-bound selector for [`compose_tree_bound`] and the sweep tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundMethod {
    /// Fold of the pair bound, [`mult_bound_exact`].
    ExactIterative,
    /// Prefix-sum approximation, [`mult_bound_approx1`].
    ApproxI,
    /// Scaled tensor bound, [`mult_bound_approx2`] with this constant.
    ApproxII {
        /// The scaling constant (conventionally 7.5).
        c: f64,
    },
    /// Plain sum of all leaf errors.
    SumOfError,
}

/// Nested composition of error-annotated components.
///
/// `Product` children are listed in execution order (`children[0]` is applied
/// first); `Tensor` children are listed top-to-bottom in the register. The
/// JSON form tags each node with `"kind"`: `"leaf"` nodes carry `eps`,
/// `qubits`, and an optional `label`; `"product"` and `"tensor"` nodes carry
/// `children`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum CompositionTree {
    /// A single approximated component at GPI distance at most `eps`.
    Leaf {
        /// Worst-case GPI distance of this component.
        eps: f64,
        /// Width of the component in qubits.
        qubits: u32,
        /// Optional human-readable tag.
        #[cfg_attr(
            feature = "serde",
            serde(default, skip_serializing_if = "Option::is_none")
        )]
        label: Option<String>,
    },
    /// Operator product of the children, `children[0]` applied first.
    Product {
        /// The factors, in execution order.
        children: Vec<CompositionTree>,
    },
    /// Tensor product of the children.
    Tensor {
        /// The factors, first child on the most significant qubits.
        children: Vec<CompositionTree>,
    },
}

/// Structural problem in a [`CompositionTree`], located by node path.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{kind} at {path}")]
pub struct TreeError {
    /// Dotted path of the offending node, e.g. `root.children[1]`.
    pub path: String,
    /// What is wrong there.
    pub kind: TreeErrorKind,
}

/// The kinds of structural problems a tree can have.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TreeErrorKind {
    /// Leaf error out of range.
    #[error("leaf eps {eps} outside [0, 1)")]
    LeafEps {
        /// The offending value.
        eps: f64,
    },
    /// Leaf qubit count must be at least 1.
    #[error("leaf qubit count must be >= 1")]
    LeafQubits,
    /// Products and tensors need at least two children.
    #[error("composite node needs at least 2 children, found {found}")]
    TooFewChildren {
        /// How many children the node has.
        found: usize,
    },
    /// Product children must act on the same number of qubits.
    #[error("product children disagree on qubit count: {left} vs {right}")]
    QubitMismatch {
        /// Qubits of the first child.
        left: u32,
        /// Qubits of the offending child.
        right: u32,
    },
}

/// Validates a tree and returns its total qubit count.
pub fn validate_tree(tree: &CompositionTree) -> Result<u32, TreeError> {
    validate_at(tree, &mut String::from("root"))
}

fn validate_at(tree: &CompositionTree, path: &mut String) -> Result<u32, TreeError> {
    let err = |path: &String, kind| {
        Err(TreeError {
            path: path.clone(),
            kind,
        })
    };
    match tree {
        CompositionTree::Leaf { eps, qubits, .. } => {
            if !(0.0..1.0).contains(eps) || !eps.is_finite() {
                return err(path, TreeErrorKind::LeafEps { eps: *eps });
            }
            if *qubits < 1 {
                return err(path, TreeErrorKind::LeafQubits);
            }
            Ok(*qubits)
        }
        CompositionTree::Product { children } => {
            if children.len() < 2 {
                return err(
                    path,
                    TreeErrorKind::TooFewChildren {
                        found: children.len(),
                    },
                );
            }
            let mut width = None;
            for (i, child) in children.iter().enumerate() {
                let len_before = path.len();
                use core::fmt::Write as _;
                let _ = write!(path, ".children[{i}]");
                let w = validate_at(child, path)?;
                path.truncate(len_before);
                match width {
                    None => width = Some(w),
                    Some(first) if first != w => {
                        return err(
                            path,
                            TreeErrorKind::QubitMismatch {
                                left: first,
                                right: w,
                            },
                        );
                    }
                    Some(_) => {}
                }
            }
            Ok(width.expect("at least two children"))
        }
        CompositionTree::Tensor { children } => {
            if children.len() < 2 {
                return err(
                    path,
                    TreeErrorKind::TooFewChildren {
                        found: children.len(),
                    },
                );
            }
            let mut total = 0u32;
            for (i, child) in children.iter().enumerate() {
                let len_before = path.len();
                use core::fmt::Write as _;
                let _ = write!(path, ".children[{i}]");
                total += validate_at(child, path)?;
                path.truncate(len_before);
            }
            Ok(total)
        }
    }
}

fn eval_node(tree: &CompositionTree, method: BoundMethod) -> f64 {
    match tree {
        CompositionTree::Leaf { eps, .. } => *eps,
        CompositionTree::Tensor { children } => {
            let values: Vec<f64> = children.iter().map(|c| eval_node(c, method)).collect();
            match method {
                BoundMethod::SumOfError => values.iter().sum(),
                _ => tensor_bound_unchecked(&values),
            }
        }
        CompositionTree::Product { children } => {
            let values: Vec<f64> = children.iter().map(|c| eval_node(c, method)).collect();
            match method {
                BoundMethod::ExactIterative => values[1..]
                    .iter()
                    .fold(values[0], |b, &e| pair_step(b, e)),
                BoundMethod::ApproxI => approx1_unchecked(&values),
                BoundMethod::ApproxII { c } => (c * tensor_bound_unchecked(&values)).min(1.0),
                BoundMethod::SumOfError => values.iter().sum(),
            }
        }
    }
}

/// Evaluates the composed error bound of a validated tree.
///
/// Leaves yield their `eps`; tensor nodes combine children with
/// [`tensor_bound`]; product nodes combine children with the selected
/// method. Under [`BoundMethod::SumOfError`] every node takes the plain sum,
/// so the result is the raw total of all leaf errors (unclamped); every other
/// method stays within `[0, 1]`.
pub fn compose_tree_bound(
    tree: &CompositionTree,
    method: BoundMethod,
) -> Result<f64, TreeError> {
    validate_tree(tree)?;
    Ok(eval_node(tree, method))
}

/// One node's intermediate bound, as reported by [`compose_tree_breakdown`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NodeBound {
    /// Dotted path of the node (`root`, `root.children[0]`, ...).
    pub path: String,
    /// Node kind: `leaf`, `product`, or `tensor`.
    pub kind: &'static str,
    /// The bound contributed by the subtree rooted here.
    pub value: f64,
}

/// Evaluates a tree and reports every node's intermediate bound in
/// depth-first order (root first).
pub fn compose_tree_breakdown(
    tree: &CompositionTree,
    method: BoundMethod,
) -> Result<Vec<NodeBound>, TreeError> {
    validate_tree(tree)?;
    let mut out = Vec::new();
    let mut path = String::from("root");
    breakdown_at(tree, method, &mut path, &mut out);
    Ok(out)
}

fn breakdown_at(
    tree: &CompositionTree,
    method: BoundMethod,
    path: &mut String,
    out: &mut Vec<NodeBound>,
) {
    let kind = match tree {
        CompositionTree::Leaf { .. } => "leaf",
        CompositionTree::Product { .. } => "product",
        CompositionTree::Tensor { .. } => "tensor",
    };
    out.push(NodeBound {
        path: path.clone(),
        kind,
        value: eval_node(tree, method),
    });
    let children = match tree {
        CompositionTree::Leaf { .. } => return,
        CompositionTree::Product { children } | CompositionTree::Tensor { children } => children,
    };
    for (i, child) in children.iter().enumerate() {
        let len_before = path.len();
        use core::fmt::Write as _;
        let _ = write!(path, ".children[{i}]");
        breakdown_at(child, method, path, out);
        path.truncate(len_before);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn leaf(eps: f64) -> CompositionTree {
        CompositionTree::Leaf {
            eps,
            qubits: 1,
            label: None,
        }
    }

    #[test]
    fn tensor_bound_values() {
        assert_eq!(tensor_bound(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((tensor_bound(&[0.1, 0.1]).unwrap() - 0.14106735979665884).abs() < 1e-15);
        assert_eq!(tensor_bound(&[0.5]).unwrap(), 0.5);
    }

    #[test]
    fn tensor_bound_validation() {
        assert!(matches!(tensor_bound(&[]), Err(ComposeError::EmptyList)));
        assert!(matches!(
            tensor_bound(&[0.5, 1.0]),
            Err(ComposeError::EpsRange { .. })
        ));
        assert!(matches!(
            tensor_bound(&[-0.1]),
            Err(ComposeError::EpsRange { .. })
        ));
    }

    #[test]
    fn pair_bound_values() {
        assert!((mult_bound_pair(0.01, 0.01).unwrap() - 0.019999499993749844).abs() < 1e-13);
        assert!((mult_bound_pair(0.0, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(mult_bound_pair(0.9, 0.9).unwrap(), 1.0);
    }

    #[test]
    fn pair_bound_below_sum() {
        let mut e1 = 0.001;
        while e1 < 0.7 {
            let mut e2 = 0.001;
            while e2 < 0.7 {
                assert!(mult_bound_pair(e1, e2).unwrap() < e1 + e2);
                e2 += 0.0437;
            }
            e1 += 0.0437;
        }
    }

    #[test]
    fn exact_fold_values() {
        assert!((mult_bound_exact(&[0.01; 3]).unwrap() - 0.029998).abs() < 1e-12);
        assert_eq!(mult_bound_exact(&[0.4]).unwrap(), 0.4);
        let ten = mult_bound_exact(&[0.01; 10]).unwrap();
        assert!((ten - 0.099917518767074278).abs() < 1e-13);
        assert!(ten < 0.1);
    }

    #[test]
    fn approx1_values() {
        assert_eq!(mult_bound_approx1(&[0.3]).unwrap(), 0.3);
        assert!(
            (mult_bound_approx1(&[0.01, 0.01]).unwrap() - 0.019999499968746718).abs() < 1e-15
        );
        assert!((mult_bound_approx1(&[0.01; 3]).unwrap() - 0.029997999708260116).abs() < 1e-15);
    }

    #[test]
    fn approx2_values() {
        assert!((mult_bound_approx2(&[0.01; 2], 7.5).unwrap() - 0.10606336549440622).abs() < 1e-13);
        assert_eq!(mult_bound_approx2(&[0.0; 5], 7.5).unwrap(), 0.0);
        assert!(
            (mult_bound_approx2(&[0.0001; 100], 7.5).unwrap() - 0.0074999981437503767).abs()
                < 1e-10
        );
        // Overestimates the exact fold at small factor counts.
        assert!(
            mult_bound_approx2(&[0.01; 2], 7.5).unwrap() > mult_bound_exact(&[0.01; 2]).unwrap()
        );
        assert!(matches!(
            mult_bound_approx2(&[0.1], 0.0),
            Err(ComposeError::BadC { .. })
        ));
    }

    #[test]
    fn sum_bound_values() {
        assert!((sum_bound(&[0.01; 10]) - 0.1).abs() < 1e-15);
        assert!((sum_bound(&[0.1, 0.2]) - 0.3).abs() < 1e-15);
        assert!(sum_bound(&[0.1, 0.1]) > tensor_bound(&[0.1, 0.1]).unwrap());
    }

    #[test]
    fn tree_single_levels() {
        let pair = CompositionTree::Product {
            children: vec![leaf(0.01), leaf(0.01)],
        };
        let got = compose_tree_bound(&pair, BoundMethod::ExactIterative).unwrap();
        assert!((got - mult_bound_pair(0.01, 0.01).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn tree_mixed_product_of_tensors() {
        let block = || CompositionTree::Tensor {
            children: vec![leaf(0.01), leaf(0.01)],
        };
        let tree = CompositionTree::Product {
            children: vec![block(), block()],
        };
        let exact = compose_tree_bound(&tree, BoundMethod::ExactIterative).unwrap();
        assert!((exact - 0.02828214998899129).abs() < 1e-14);
        let a1 = compose_tree_bound(&tree, BoundMethod::ApproxI).unwrap();
        assert!((a1 - 0.028282149847552252).abs() < 1e-14);
        let a2 = compose_tree_bound(&tree, BoundMethod::ApproxII { c: 7.5 }).unwrap();
        assert!((a2 - 0.14998875032813086).abs() < 1e-13);
        let sum = compose_tree_bound(&tree, BoundMethod::SumOfError).unwrap();
        assert!((sum - 0.04).abs() < 1e-15, "plain sum over all leaves");
    }

    #[test]
    fn tree_tensor_of_products() {
        let block = || CompositionTree::Product {
            children: vec![leaf(0.01), leaf(0.01)],
        };
        let tree = CompositionTree::Tensor {
            children: vec![block(), block()],
        };
        let got = compose_tree_bound(&tree, BoundMethod::ExactIterative).unwrap();
        assert!((got - 0.028280735775428475).abs() < 1e-14);
    }

    #[test]
    fn tree_bound_below_leaf_sum() {
        let tree = CompositionTree::Product {
            children: vec![
                CompositionTree::Tensor {
                    children: vec![leaf(0.02), leaf(0.01)],
                },
                CompositionTree::Tensor {
                    children: vec![leaf(0.03), leaf(0.015)],
                },
            ],
        };
        let total = 0.02 + 0.01 + 0.03 + 0.015;
        for method in [
            BoundMethod::ExactIterative,
            BoundMethod::ApproxI,
        ] {
            assert!(compose_tree_bound(&tree, method).unwrap() < total);
        }
    }

    #[test]
    fn tree_validation_errors() {
        let bad_eps = CompositionTree::Product {
            children: vec![leaf(0.01), leaf(1.5)],
        };
        let err = compose_tree_bound(&bad_eps, BoundMethod::ExactIterative).unwrap_err();
        assert_eq!(err.path, "root.children[1]");
        assert!(matches!(err.kind, TreeErrorKind::LeafEps { .. }));

        let too_few = CompositionTree::Tensor {
            children: vec![leaf(0.01)],
        };
        let err = validate_tree(&too_few).unwrap_err();
        assert!(matches!(err.kind, TreeErrorKind::TooFewChildren { found: 1 }));

        let mismatch = CompositionTree::Product {
            children: vec![
                leaf(0.01),
                CompositionTree::Tensor {
                    children: vec![leaf(0.01), leaf(0.01)],
                },
            ],
        };
        let err = validate_tree(&mismatch).unwrap_err();
        assert!(matches!(
            err.kind,
            TreeErrorKind::QubitMismatch { left: 1, right: 2 }
        ));
        let msg = format!("{err}");
        assert!(msg.contains("root"), "message names the node: {msg}");
    }

    #[test]
    fn breakdown_reports_every_node() {
        let tree = CompositionTree::Product {
            children: vec![
                CompositionTree::Tensor {
                    children: vec![leaf(0.01), leaf(0.02)],
                },
                CompositionTree::Tensor {
                    children: vec![leaf(0.03), leaf(0.04)],
                },
            ],
        };
        let rows = compose_tree_breakdown(&tree, BoundMethod::ExactIterative).unwrap();
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[0].path, "root");
        assert_eq!(rows[0].kind, "product");
        assert_eq!(rows[1].path, "root.children[0]");
        let root = compose_tree_bound(&tree, BoundMethod::ExactIterative).unwrap();
        assert_eq!(rows[0].value, root);
    }

    #[cfg(feature = "serde")]
    #[test]
    fn tree_json_roundtrip() {
        let tree = CompositionTree::Product {
            children: vec![
                CompositionTree::Leaf {
                    eps: 0.01,
                    qubits: 1,
                    label: Some(alloc::string::String::from("rz")),
                },
                CompositionTree::Tensor {
                    children: vec![leaf(0.02), leaf(0.03)],
                },
            ],
        };
        let json = serde_json::to_string(&tree).unwrap();
        assert!(json.contains("\"kind\":\"product\""));
        assert!(json.contains("\"kind\":\"leaf\""));
        assert!(json.contains("\"label\":\"rz\""));
        let back: CompositionTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tree);

        let literal = r#"{
            "kind": "product",
            "children": [
                {"kind": "leaf", "eps": 0.01, "qubits": 1},
                {"kind": "leaf", "eps": 0.01, "qubits": 1}
            ]
        }"#;
        let parsed: CompositionTree = serde_json::from_str(literal).unwrap();
        let got = compose_tree_bound(&parsed, BoundMethod::ExactIterative).unwrap();
        assert!((got - 0.019999499993749844).abs() < 1e-13);
    }
}
