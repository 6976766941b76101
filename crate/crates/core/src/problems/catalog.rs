// Optimizer coordinates are kept exactly as published.
#![allow(clippy::excessive_precision)]

//! Built-in benchmark problems: four classic unconstrained test functions and
//! the eleven constrained problems G1-G11 of Michalewicz and Schoenauer.

use std::f64::consts::PI;
use std::sync::Arc;

use super::{Bounds, ProblemDef, ScalarFn, Sense};
use crate::error::{Error, Result};

/// Tolerance used to turn the equality constraints of G3, G5 and G11 into
/// inequalities.
pub const EQUALITY_EPSILON: f64 = 1e-4;

/// Built-in problem IDs in reporting order: the unconstrained set, then the
/// inequality-constrained problems, then the equality-constrained ones.
pub const BUILTIN_IDS: [&str; 15] = [
    "GP", "BR", "H3", "SH", "G1", "G2", "G4", "G6", "G7", "G8", "G9", "G10", "G3", "G5", "G11",
];

/// All fifteen built-in problems, in [`BUILTIN_IDS`] order.
pub fn benchmark_catalog() -> Vec<ProblemDef> {
    BUILTIN_IDS
        .iter()
        .map(|id| builtin(id).expect("catalog ids are valid"))
        .collect()
}

/// Looks up a built-in problem by ID (case-insensitive).
pub fn builtin(id: &str) -> Result<ProblemDef> {
    let p = match id.to_ascii_uppercase().as_str() {
        "GP" => goldstein_price(),
        "BR" => branin(),
        "H3" => hartman3(),
        "SH" => shubert(),
        "G1" => g1(),
        "G2" => g2(),
        "G3" => g3(),
        "G4" => g4(),
        "G5" => g5(),
        "G6" => g6(),
        "G7" => g7(),
        "G8" => g8(),
        "G9" => g9(),
        "G10" => g10(),
        "G11" => g11(),
        other => return Err(Error::config(format!("unknown built-in problem `{other}`"))),
    };
    Ok(p)
}

fn f(func: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(func)
}

fn bounds(pairs: &[(f64, f64)]) -> Vec<Bounds> {
    pairs
        .iter()
        .map(|&(l, u)| Bounds::new(l, u).expect("static bounds are valid"))
        .collect()
}

fn uniform_bounds(d: usize, l: f64, u: f64) -> Vec<Bounds> {
    bounds(&vec![(l, u); d])
}

fn problem(name: &str, b: Vec<Bounds>, objective: ScalarFn) -> ProblemDef {
    ProblemDef::new(name, b, objective).expect("static problem is valid")
}

fn with_constraints(p: ProblemDef, gs: Vec<ScalarFn>) -> ProblemDef {
    gs.into_iter().fold(p, ProblemDef::with_constraint)
}

fn goldstein_price() -> ProblemDef {
    problem(
        "GP",
        uniform_bounds(2, -2.0, 2.0),
        f(|x| {
            let (a, b) = (x[0], x[1]);
            let t1 = 1.0
                + (a + b + 1.0).powi(2)
                    * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
            let t2 = 30.0
                + (2.0 * a - 3.0 * b).powi(2)
                    * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
            t1 * t2
        }),
    )
    .with_known_best(3.0)
    .with_optimizer(vec![0.0, -1.0])
}

fn branin() -> ProblemDef {
    problem(
        "BR",
        bounds(&[(-5.0, 10.0), (0.0, 15.0)]),
        f(|x| {
            let (a, b) = (x[0], x[1]);
            (b - 5.1 / (4.0 * PI * PI) * a * a + 5.0 / PI * a - 6.0).powi(2)
                + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * a.cos()
                + 10.0
        }),
    )
    .with_known_best(0.397887)
    .with_optimizer(vec![PI, 2.275])
}

const H3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const H3_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const H3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.03815, 0.5743, 0.8828],
];

fn hartman3() -> ProblemDef {
    problem(
        "H3",
        uniform_bounds(3, 0.0, 1.0),
        f(|x| {
            -(0..4)
                .map(|i| {
                    let r: f64 = (0..3).map(|j| H3_A[i][j] * (x[j] - H3_P[i][j]).powi(2)).sum();
                    H3_C[i] * (-r).exp()
                })
                .sum::<f64>()
        }),
    )
    .with_known_best(-3.86278)
    .with_optimizer(vec![0.114614, 0.555649, 0.852547])
}

fn shubert() -> ProblemDef {
    fn factor(v: f64) -> f64 {
        (1..=5)
            .map(|i| {
                let i = i as f64;
                i * ((i + 1.0) * v + i).cos()
            })
            .sum()
    }
    problem(
        "SH",
        uniform_bounds(2, -10.0, 10.0),
        f(|x| factor(x[0]) * factor(x[1])),
    )
    .with_known_best(-186.7309)
    .with_optimizer(vec![-7.083_506_4, 4.858_056_9])
}

fn g1() -> ProblemDef {
    let mut b = vec![(0.0, 1.0); 9];
    b.extend([(0.0, 100.0); 3]);
    b.push((0.0, 1.0));
    let p = problem(
        "G1",
        bounds(&b),
        f(|x| {
            5.0 * x[..4].iter().sum::<f64>()
                - 5.0 * x[..4].iter().map(|v| v * v).sum::<f64>()
                - x[4..].iter().sum::<f64>()
        }),
    );
    with_constraints(
        p,
        vec![
            f(|x| 2.0 * x[0] + 2.0 * x[1] + x[9] + x[10] - 10.0),
            f(|x| 2.0 * x[0] + 2.0 * x[2] + x[9] + x[11] - 10.0),
            f(|x| 2.0 * x[1] + 2.0 * x[2] + x[10] + x[11] - 10.0),
            f(|x| -8.0 * x[0] + x[9]),
            f(|x| -8.0 * x[1] + x[10]),
            f(|x| -8.0 * x[2] + x[11]),
            f(|x| -2.0 * x[3] - x[4] + x[9]),
            f(|x| -2.0 * x[5] - x[6] + x[10]),
            f(|x| -2.0 * x[7] - x[8] + x[11]),
        ],
    )
    .with_known_best(-15.0)
    .with_optimizer(vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 3.0, 1.0])
}

fn g2() -> ProblemDef {
    const D: usize = 20;
    let p = problem(
        "G2",
        uniform_bounds(D, 0.0, 10.0),
        f(|x| {
            let s4: f64 = x.iter().map(|v| v.cos().powi(4)).sum();
            let p2: f64 = x.iter().map(|v| v.cos().powi(2)).product();
            let w: f64 = x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum();
            (s4 - 2.0 * p2).abs() / w.sqrt()
        }),
    )
    .with_sense(Sense::Maximize);
    with_constraints(
        p,
        vec![
            f(|x| 0.75 - x.iter().product::<f64>()),
            f(|x| x.iter().sum::<f64>() - 7.5 * x.len() as f64),
        ],
    )
    .with_known_best(0.80362)
    .with_optimizer(vec![
        3.16246061572185,
        3.12833142812967,
        3.09479212988791,
        3.06145059523469,
        3.02792915885555,
        2.99382606701730,
        2.95866871765285,
        2.92184227312450,
        0.49482511456933,
        0.48835711005490,
        0.48231642711865,
        0.47664475092742,
        0.47129550835493,
        0.46623099264167,
        0.46142004984199,
        0.45683664767217,
        0.45245876903267,
        0.44826762241853,
        0.44424700958760,
        0.44038285956317,
    ])
}

fn g3() -> ProblemDef {
    const D: usize = 10;
    problem(
        "G3",
        uniform_bounds(D, 0.0, 1.0),
        f(|x| {
            let n = x.len() as f64;
            n.sqrt().powi(x.len() as i32) * x.iter().product::<f64>()
        }),
    )
    .with_sense(Sense::Maximize)
    .with_equality(f(|x| x.iter().map(|v| v * v).sum::<f64>() - 1.0), EQUALITY_EPSILON)
    .expect("positive tolerance")
    .with_known_best(1.0005)
    .with_optimizer(vec![1.0 / (D as f64).sqrt(); D])
}

fn g4() -> ProblemDef {
    fn u(x: &[f64]) -> f64 {
        85.334407 + 0.0056858 * x[1] * x[4] + 0.0006262 * x[0] * x[3] - 0.0022053 * x[2] * x[4]
    }
    fn v(x: &[f64]) -> f64 {
        80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] + 0.0021813 * x[2] * x[2]
    }
    fn w(x: &[f64]) -> f64 {
        9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] + 0.0019085 * x[2] * x[3]
    }
    let p = problem(
        "G4",
        bounds(&[(78.0, 102.0), (33.0, 45.0), (27.0, 45.0), (27.0, 45.0), (27.0, 45.0)]),
        f(|x| {
            5.3578547 * x[2] * x[2] + 0.8356891 * x[0] * x[4] + 37.293239 * x[0] - 40792.141
        }),
    );
    with_constraints(
        p,
        vec![
            f(|x| -u(x)),
            f(|x| u(x) - 92.0),
            f(|x| 90.0 - v(x)),
            f(|x| v(x) - 110.0),
            f(|x| 20.0 - w(x)),
            f(|x| w(x) - 25.0),
        ],
    )
    .with_known_best(-30665.5)
    .with_optimizer(vec![78.0, 33.0, 29.995256025682, 45.0, 36.775812905788])
}

fn g5() -> ProblemDef {
    let p = problem(
        "G5",
        bounds(&[(0.0, 1200.0), (0.0, 1200.0), (-0.55, 0.55), (-0.55, 0.55)]),
        f(|x| {
            3.0 * x[0] + 0.000001 * x[0].powi(3) + 2.0 * x[1] + (0.000002 / 3.0) * x[1].powi(3)
        }),
    );
    let p = with_constraints(
        p,
        vec![
            f(|x| -x[3] + x[2] - 0.55),
            f(|x| -x[2] + x[3] - 0.55),
        ],
    );
    let equalities = [
        f(|x| 1000.0 * (-x[2] - 0.25).sin() + 1000.0 * (-x[3] - 0.25).sin() + 894.8 - x[0]),
        f(|x| 1000.0 * (x[2] - 0.25).sin() + 1000.0 * (x[2] - x[3] - 0.25).sin() + 894.8 - x[1]),
        f(|x| 1000.0 * (x[3] - 0.25).sin() + 1000.0 * (x[3] - x[2] - 0.25).sin() + 1294.8),
    ];
    equalities
        .into_iter()
        .try_fold(p, |p, h| p.with_equality(h, EQUALITY_EPSILON))
        .expect("positive tolerance")
        .with_known_best(5126.497)
        .with_optimizer(vec![
            679.945148297028709,
            1026.06697600004691,
            0.118876369094410433,
            -0.39623348521517826,
        ])
}

fn g6() -> ProblemDef {
    let p = problem(
        "G6",
        bounds(&[(13.0, 100.0), (0.0, 100.0)]),
        f(|x| (x[0] - 10.0).powi(3) + (x[1] - 20.0).powi(3)),
    );
    with_constraints(
        p,
        vec![
            f(|x| -(x[0] - 5.0).powi(2) - (x[1] - 5.0).powi(2) + 100.0),
            f(|x| (x[0] - 6.0).powi(2) + (x[1] - 5.0).powi(2) - 82.81),
        ],
    )
    .with_known_best(-6961.81)
    .with_optimizer(vec![14.09500000000000064, 0.8429607892154795668])
}

fn g7() -> ProblemDef {
    let p = problem(
        "G7",
        uniform_bounds(10, -10.0, 10.0),
        f(|x| {
            x[0] * x[0] + x[1] * x[1] + x[0] * x[1] - 14.0 * x[0] - 16.0 * x[1]
                + (x[2] - 10.0).powi(2)
                + 4.0 * (x[3] - 5.0).powi(2)
                + (x[4] - 3.0).powi(2)
                + 2.0 * (x[5] - 1.0).powi(2)
                + 5.0 * x[6] * x[6]
                + 7.0 * (x[7] - 11.0).powi(2)
                + 2.0 * (x[8] - 10.0).powi(2)
                + (x[9] - 7.0).powi(2)
                + 45.0
        }),
    );
    with_constraints(
        p,
        vec![
            f(|x| -105.0 + 4.0 * x[0] + 5.0 * x[1] - 3.0 * x[6] + 9.0 * x[7]),
            f(|x| 10.0 * x[0] - 8.0 * x[1] - 17.0 * x[6] + 2.0 * x[7]),
            f(|x| -8.0 * x[0] + 2.0 * x[1] + 5.0 * x[8] - 2.0 * x[9] - 12.0),
            f(|x| {
                3.0 * (x[0] - 2.0).powi(2) + 4.0 * (x[1] - 3.0).powi(2) + 2.0 * x[2] * x[2]
                    - 7.0 * x[3]
                    - 120.0
            }),
            f(|x| 5.0 * x[0] * x[0] + 8.0 * x[1] + (x[2] - 6.0).powi(2) - 2.0 * x[3] - 40.0),
            f(|x| {
                x[0] * x[0] + 2.0 * (x[1] - 2.0).powi(2) - 2.0 * x[0] * x[1] + 14.0 * x[4]
                    - 6.0 * x[5]
            }),
            f(|x| {
                0.5 * (x[0] - 8.0).powi(2) + 2.0 * (x[1] - 4.0).powi(2) + 3.0 * x[4] * x[4]
                    - x[5]
                    - 30.0
            }),
            f(|x| -3.0 * x[0] + 6.0 * x[1] + 12.0 * (x[8] - 8.0).powi(2) - 7.0 * x[9]),
        ],
    )
    .with_known_best(24.306)
    .with_optimizer(vec![
        2.17199634142692,
        2.3636830416034,
        8.77392573913157,
        5.09598443745173,
        0.990654756560493,
        1.43057392853463,
        1.32164415364306,
        9.82872576524495,
        8.2800915887356,
        8.3759266477347,
    ])
}

fn g8() -> ProblemDef {
    let p = problem(
        "G8",
        uniform_bounds(2, 0.0, 10.0),
        f(|x| {
            (2.0 * PI * x[0]).sin().powi(3) * (2.0 * PI * x[1]).sin()
                / (x[0].powi(3) * (x[0] + x[1]))
        }),
    )
    .with_sense(Sense::Maximize);
    with_constraints(
        p,
        vec![
            f(|x| x[0] * x[0] - x[1] + 1.0),
            f(|x| 1.0 - x[0] + (x[1] - 4.0).powi(2)),
        ],
    )
    .with_known_best(0.095825)
    .with_optimizer(vec![1.22797135260752599, 4.24537336612274885])
}

fn g9() -> ProblemDef {
    let p = problem(
        "G9",
        uniform_bounds(7, -10.0, 10.0),
        f(|x| {
            (x[0] - 10.0).powi(2)
                + 5.0 * (x[1] - 12.0).powi(2)
                + x[2].powi(4)
                + 3.0 * (x[3] - 11.0).powi(2)
                + 10.0 * x[4].powi(6)
                + 7.0 * x[5] * x[5]
                + x[6].powi(4)
                - 4.0 * x[5] * x[6]
                - 10.0 * x[5]
                - 8.0 * x[6]
        }),
    );
    with_constraints(
        p,
        vec![
            f(|x| {
                -127.0 + 2.0 * x[0] * x[0] + 3.0 * x[1].powi(4) + x[2] + 4.0 * x[3] * x[3]
                    + 5.0 * x[4]
            }),
            f(|x| -282.0 + 7.0 * x[0] + 3.0 * x[1] + 10.0 * x[2] * x[2] + x[3] - x[4]),
            f(|x| -196.0 + 23.0 * x[0] + x[1] * x[1] + 6.0 * x[5] * x[5] - 8.0 * x[6]),
            f(|x| {
                4.0 * x[0] * x[0] + x[1] * x[1] - 3.0 * x[0] * x[1] + 2.0 * x[2] * x[2]
                    + 5.0 * x[5]
                    - 11.0 * x[6]
            }),
        ],
    )
    .with_known_best(680.630)
    .with_optimizer(vec![
        2.33049935147405174,
        1.95137236847114592,
        -0.477541399510615805,
        4.36572624923625874,
        -0.624486959100388983,
        1.03813099410962173,
        1.5942266780671519,
    ])
}

fn g10() -> ProblemDef {
    let mut b = vec![(100.0, 10000.0), (1000.0, 10000.0), (1000.0, 10000.0)];
    b.extend([(10.0, 1000.0); 5]);
    let p = problem("G10", bounds(&b), f(|x| x[0] + x[1] + x[2]));
    with_constraints(
        p,
        vec![
            f(|x| -1.0 + 0.0025 * (x[3] + x[5])),
            f(|x| -1.0 + 0.0025 * (x[4] + x[6] - x[3])),
            f(|x| -1.0 + 0.01 * (x[7] - x[4])),
            f(|x| -x[0] * x[5] + 833.33252 * x[3] + 100.0 * x[0] - 83333.333),
            f(|x| -x[1] * x[6] + 1250.0 * x[4] + x[1] * x[3] - 1250.0 * x[3]),
            f(|x| -x[2] * x[7] + 1_250_000.0 + x[2] * x[4] - 2500.0 * x[4]),
        ],
    )
    .with_known_best(7049.248)
    .with_optimizer(vec![
        579.306685017979589,
        1359.97067807935605,
        5109.97065743133317,
        182.01769963061534,
        295.601173702746792,
        217.982300369384632,
        286.41652592786852,
        395.601173702746735,
    ])
}

fn g11() -> ProblemDef {
    problem(
        "G11",
        uniform_bounds(2, -1.0, 1.0),
        f(|x| x[0] * x[0] + (x[1] - 1.0).powi(2)),
    )
    .with_equality(f(|x| x[1] - x[0] * x[0]), EQUALITY_EPSILON)
    .expect("positive tolerance")
    .with_known_best(0.7499)
    .with_optimizer(vec![-0.707036070037170616, 0.500000004333606807])
}
