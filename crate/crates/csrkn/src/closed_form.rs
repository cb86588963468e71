//! Closed-form coefficient tables for the three Gauss-node symplectic
//! families, transcribed from their published radical expressions.
//!
//! These serve as cross-check fixtures: the generator path
//! (`build_symplectic_family` + `discretize`) is the ground truth, and
//! [`compare_tableaux`] reports every entry where the printed table
//! disagrees with it. The 3-stage table matches the generator exactly;
//! parts of the 4-stage table are known to be misprinted (most visibly the
//! θ-dependent terms), which the comparison surfaces entry by entry.

use crate::error::Result;
use crate::tableau::RknTableau;

/// One coefficient where a generated tableau and a closed-form table
/// disagree beyond the comparison tolerance.
#[derive(Debug, Clone)]
pub struct EntryMismatch {
    /// Location label, e.g. `a_bar[1][2]`, `b_bar[0]`, `c[3]`.
    pub location: String,
    pub generated: f64,
    pub published: f64,
}

impl EntryMismatch {
    pub fn difference(&self) -> f64 {
        self.generated - self.published
    }
}

/// Entry-wise comparison of two equally sized tableaux.
#[derive(Debug, Clone)]
pub struct TableauComparison {
    pub max_abs_difference: f64,
    /// Entries whose absolute difference exceeds the tolerance.
    pub mismatches: Vec<EntryMismatch>,
}

impl TableauComparison {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare `generated` against `published` entry by entry, collecting every
/// coefficient that differs by more than `tol`.
pub fn compare_tableaux(
    generated: &RknTableau,
    published: &RknTableau,
    tol: f64,
) -> TableauComparison {
    assert_eq!(
        generated.stages(),
        published.stages(),
        "stage counts differ"
    );
    let s = generated.stages();
    let mut mismatches = Vec::new();
    let mut max_abs: f64 = 0.0;
    let push = |location: String, g: f64, p: f64, mismatches: &mut Vec<EntryMismatch>| {
        if (g - p).abs() > tol {
            mismatches.push(EntryMismatch {
                location,
                generated: g,
                published: p,
            });
        }
    };
    for i in 0..s {
        for j in 0..s {
            let g = generated.a_bar()[i][j];
            let p = published.a_bar()[i][j];
            max_abs = max_abs.max((g - p).abs());
            push(format!("a_bar[{i}][{j}]"), g, p, &mut mismatches);
        }
    }
    for (name, gs, ps) in [
        ("c", generated.c(), published.c()),
        ("b", generated.b(), published.b()),
        ("b_bar", generated.b_bar(), published.b_bar()),
    ] {
        for i in 0..s {
            max_abs = max_abs.max((gs[i] - ps[i]).abs());
            push(format!("{name}[{i}]"), gs[i], ps[i], &mut mismatches);
        }
    }
    TableauComparison {
        max_abs_difference: max_abs,
        mismatches,
    }
}

/// The published 2-stage table of the order-4 family.
pub fn published_order4(theta: f64) -> Result<RknTableau> {
    let r3 = 3f64.sqrt();
    let a = vec![
        vec![(1.0 + 6.0 * theta) / 12.0, (1.0 - r3 - 6.0 * theta) / 12.0],
        vec![(1.0 + r3 - 6.0 * theta) / 12.0, (1.0 + 6.0 * theta) / 12.0],
    ];
    let b_bar = vec![(3.0 + r3) / 12.0, (3.0 - r3) / 12.0];
    let b = vec![0.5, 0.5];
    let c = vec![(3.0 - r3) / 6.0, (3.0 + r3) / 6.0];
    RknTableau::from_parts(c, b, b_bar, a, 4, true)
}

/// The published 3-stage table of the order-6 family.
pub fn published_order6(theta: f64) -> Result<RknTableau> {
    let r15 = 15f64.sqrt();
    let t = theta;
    let a = vec![
        vec![
            (2.0 + 30.0 * t) / 135.0,
            (19.0 - 6.0 * r15 - 120.0 * t) / 270.0,
            (62.0 - 15.0 * r15 + 120.0 * t) / 540.0,
        ],
        vec![
            (19.0 + 6.0 * r15 - 120.0 * t) / 432.0,
            (1.0 + 15.0 * t) / 27.0,
            (19.0 - 6.0 * r15 - 120.0 * t) / 432.0,
        ],
        vec![
            (62.0 + 15.0 * r15 + 120.0 * t) / 540.0,
            (19.0 + 6.0 * r15 - 120.0 * t) / 270.0,
            (2.0 + 30.0 * t) / 135.0,
        ],
    ];
    let b_bar = vec![(5.0 + r15) / 36.0, 2.0 / 9.0, (5.0 - r15) / 36.0];
    let b = vec![5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0];
    let c = vec![(5.0 - r15) / 10.0, 0.5, (5.0 + r15) / 10.0];
    RknTableau::from_parts(c, b, b_bar, a, 6, true)
}

/// The published 4-stage table of the order-8 family, transcribed verbatim
/// including its suspect terms (e.g. the θ denominator 29400525).
pub fn published_order8(theta: f64) -> Result<RknTableau> {
    let t = theta;
    let r30 = 30f64.sqrt();
    let r14 = 14f64.sqrt();
    let r105 = 105f64.sqrt();
    // nested radicals shared by the node and weight columns
    let ra = (630.0 + 84.0 * r30).sqrt();
    let rb = (630.0 - 84.0 * r30).sqrt();
    let rc = (525.0 + 70.0 * r30).sqrt();
    let rd = (525.0 - 70.0 * r30).sqrt();

    let a11 = -3.0 * r30 / 2800.0 + 3.0 / 280.0 - r30 * t / 40.0 + t / 4.0;
    let a12 = r30 / 336.0 - ra / 2016.0 + rb / 2016.0 - r14 / 490.0 - r14 * t / 29_400_525.0
        + 3.0 / 56.0
        - rc / 560.0
        + rd / 560.0
        - 3.0 * r105 / 1225.0
        - 3.0 * r105 * t / 140.0;
    let a13 =
        r30 / 336.0 - ra / 2016.0 - rb / 2016.0 + r14 / 490.0 + r14 * t / 29_400_525.0 + 3.0 / 56.0
            - rc / 560.0
            - rd / 560.0
            + 3.0 * r105 / 1225.0
            + 3.0 * r105 * t / 140.0;
    let a14 =
        19.0 * r30 / 8400.0 + ra / 1008.0 + 17.0 / 280.0 + r30 * t / 40.0 - t / 4.0 - rc / 280.0;

    let a21 = -r30 / 336.0 + rb / 2016.0 - ra / 2016.0
        + r14 / 490.0
        + r14 * t / 29_400_525.0
        + 3.0 / 56.0
        - rd / 560.0
        + rc / 560.0
        - 3.0 * r105 / 1225.0
        - 3.0 * r105 * t / 140.0;
    let a22 = 3.0 * r30 / 2800.0 + 3.0 / 280.0 + r30 * t / 40.0 + t / 4.0;
    let a23 =
        -19.0 * r30 / 8400.0 - rb / 1008.0 + 17.0 / 280.0 - r30 * t / 40.0 - t / 4.0 - rd / 280.0;
    let a24 = -r30 / 336.0 + ra / 2016.0 + rb / 2016.0 - r14 / 490.0 - r14 * t / 56.0 + 3.0 / 56.0
        - rc / 560.0
        - rd / 560.0
        + 3.0 * r105 / 1225.0
        + 3.0 * r105 * t / 140.0;

    let a31 = -r30 / 336.0 - rb / 2016.0 - ra / 2016.0 - r14 / 490.0 - r14 * t / 56.0
        + 3.0 / 56.0
        + 3.0 * r105 / 1225.0
        + rd / 560.0
        + rc / 560.0
        + 3.0 * r105 * t / 140.0;
    let a32 = -19.0 * r30 / 8400.0 - r30 * t / 40.0 + rb / 1008.0 + (17.0 - 70.0 * t + rd) / 280.0;
    let a33 = (3.0 * r30 + 30.0) / 2800.0 + (r30 + 10.0) * t / 40.0;
    let a34 = -r30 / 336.0 + (ra - rb) / 2016.0 + r14 / 490.0
        - 3.0 * r105 / 1225.0
        - 3.0 * r105 * t / 140.0
        + (10.0 * r14 * t + 30.0 + rd - rc) / 560.0;

    let a41 = -ra / 1008.0 + 19.0 * r30 / 8400.0 + (r30 - 10.0) * t / 40.0 + (17.0 + rc) / 280.0;
    let a42 = r30 / 336.0
        + r14 / 490.0
        + (r14 * t + 3.0) / 56.0
        + (rb + ra) / 2016.0
        + (rd + rc) / 560.0
        + 3.0 * r105 / 1225.0
        + 3.0 * r105 * t / 140.0;
    let a43 = (r30 + 18.0 - 6.0 * r14 * t) / 336.0 + (ra - rb) / 2016.0 - r14 / 490.0
        + (rc - rd) / 560.0
        - 3.0 * r105 / 1225.0
        - 3.0 * r105 * t / 140.0;
    let a44 = (30.0 - 3.0 * r30) / 2800.0 + (10.0 - r30) * t / 40.0;

    let a = vec![
        vec![a11, a12, a13, a14],
        vec![a21, a22, a23, a24],
        vec![a31, a32, a33, a34],
        vec![a41, a42, a43, a44],
    ];
    let b_bar = vec![
        -r30 / 144.0 - ra / 1008.0 + 0.125 + rc / 280.0,
        r30 / 144.0 + rb / 1008.0 + 0.125 + rd / 280.0,
        r30 / 144.0 - rb / 1008.0 + 0.125 - rd / 280.0,
        -r30 / 144.0 + ra / 1008.0 + 0.125 - rc / 280.0,
    ];
    let b = vec![
        0.25 - r30 / 72.0,
        0.25 + r30 / 72.0,
        0.25 + r30 / 72.0,
        0.25 - r30 / 72.0,
    ];
    let c = vec![
        (35.0 - rc) / 70.0,
        (35.0 - rd) / 70.0,
        (35.0 + rd) / 70.0,
        (35.0 + rc) / 70.0,
    ];
    RknTableau::from_parts(c, b, b_bar, a, 8, true)
}

/// The published table for the given family order.
pub fn published_tableau(order: u32, theta: f64) -> Result<RknTableau> {
    match order {
        4 => published_order4(theta),
        6 => published_order6(theta),
        8 => published_order8(theta),
        other => Err(crate::error::Error::UnsupportedOrder(other)),
    }
}
