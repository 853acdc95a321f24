//! Embedded corpus of Wooley-integer certificates for `2^k · p`, taken from
//! the generator-index rows of the published table.
//!
//! One row is corrected: the `2^3 · 13` row is printed with `g(5)^3`, which
//! evaluates to 30056/121. With `g(5)^1` it evaluates to 104. The printed
//! form is kept in [`TABLE1_PRINTED_2_3_13`] for the regression test.

use num_bigint::BigUint;

use super::WooleyCert;
use crate::Rat;

/// A corpus row: target `2^k · p` and its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub k: u32,
    pub p: u64,
    pub target: Rat,
    pub cert: WooleyCert,
}

impl Table1Row {
    /// `2^k·p`, e.g. `2^2·5`.
    pub fn label(&self) -> String {
        format!("2^{}·{}", self.k, self.p)
    }
}

type Row = (u32, u64, &'static [(u64, u64)]);

const ROWS: [Row; 13] = [
    (2, 5, &[(3, 2), (5, 1), (8, 1), (27, 1), (32, 1), (41, 1)]),
    (
        2,
        7,
        &[(3, 1), (8, 1), (11, 1), (71, 1), (99, 1), (107, 1), (123, 1), (132, 1)],
    ),
    (
        2,
        11,
        &[(3, 2), (8, 1), (11, 1), (71, 1), (99, 1), (107, 1), (123, 1), (132, 1)],
    ),
    (
        3,
        13,
        &[
            (3, 2),
            (5, 1),
            (8, 2),
            (11, 1),
            (71, 1),
            (99, 1),
            (107, 1),
            (123, 1),
            (132, 1),
        ],
    ),
    (
        2,
        17,
        &[
            (3, 2),
            (5, 1),
            (8, 1),
            (27, 1),
            (32, 1),
            (41, 1),
            (47, 1),
            (71, 1),
            (107, 1),
        ],
    ),
    (
        5,
        19,
        &[(3, 4), (5, 2), (8, 2), (12, 1), (27, 2), (32, 2), (41, 2)],
    ),
    (
        5,
        23,
        &[
            (3, 1),
            (8, 1),
            (11, 1),
            (15, 1),
            (45, 1),
            (51, 1),
            (68, 1),
            (71, 1),
            (99, 2),
            (107, 1),
            (117, 1),
            (123, 1),
            (132, 2),
            (176, 1),
        ],
    ),
    (
        5,
        29,
        &[
            (3, 4),
            (5, 2),
            (8, 2),
            (9, 1),
            (12, 1),
            (27, 2),
            (32, 2),
            (41, 2),
        ],
    ),
    (
        11,
        31,
        &[
            (3, 6),
            (5, 3),
            (8, 3),
            (9, 1),
            (12, 1),
            (20, 1),
            (27, 3),
            (32, 3),
            (41, 3),
            (54, 1),
            (72, 1),
        ],
    ),
    (
        5,
        37,
        &[
            (3, 2),
            (8, 2),
            (11, 2),
            (24, 1),
            (71, 2),
            (99, 2),
            (107, 2),
            (123, 2),
            (132, 2),
        ],
    ),
    (
        10,
        41,
        &[
            (3, 6),
            (5, 3),
            (8, 3),
            (9, 1),
            (12, 1),
            (27, 3),
            (32, 3),
            (41, 3),
            (54, 1),
            (72, 1),
        ],
    ),
    (
        11,
        43,
        &[
            (3, 5),
            (5, 2),
            (8, 3),
            (9, 1),
            (11, 1),
            (12, 1),
            (27, 2),
            (32, 2),
            (41, 2),
            (71, 1),
            (99, 1),
            (101, 1),
            (107, 1),
            (114, 1),
            (123, 1),
            (132, 1),
            (152, 1),
        ],
    ),
    (
        11,
        47,
        &[
            (3, 6),
            (5, 3),
            (8, 3),
            (9, 1),
            (12, 1),
            (15, 1),
            (20, 1),
            (27, 3),
            (32, 3),
            (41, 3),
            (54, 1),
            (72, 1),
        ],
    ),
];

/// The `2^3·13` row exactly as printed (does not evaluate to 104).
pub const TABLE1_PRINTED_2_3_13: &[(u64, u64)] = &[
    (3, 2),
    (5, 3),
    (8, 2),
    (11, 1),
    (71, 1),
    (99, 1),
    (107, 1),
    (123, 1),
    (132, 1),
];

pub(crate) fn cert_of(pairs: &[(u64, u64)]) -> WooleyCert {
    WooleyCert::new(pairs.iter().map(|&(n, e)| (BigUint::from(n), e))).expect("static rows are valid")
}

/// All thirteen rows in table order.
pub fn builtin_table1() -> Vec<Table1Row> {
    ROWS.iter()
        .map(|&(k, p, pairs)| Table1Row {
            k,
            p,
            target: Rat::from_integer(BigUint::from(p) << k as usize),
            cert: cert_of(pairs),
        })
        .collect()
}

/// Looks up the row for `2^k·p` by its odd part `p`.
pub fn table1_row(p: u64) -> Option<Table1Row> {
    builtin_table1().into_iter().find(|r| r.p == p)
}

/// `g(29)·g(44)·g(69)·g(78)·g(92)·g(104) = 2^5·67 / (5·37)`.
pub fn identity_67() -> WooleyCert {
    cert_of(&[(29, 1), (44, 1), (69, 1), (78, 1), (92, 1), (104, 1)])
}

/// Certificate for `2^12·67`: the identity above times the rows for `2^2·5`
/// and `2^5·37`.
pub fn composite_67_identity() -> (Rat, WooleyCert) {
    let r5 = table1_row(5).expect("row present").cert;
    let r37 = table1_row(37).expect("row present").cert;
    let cert = identity_67().compose(&r5).compose(&r37);
    (Rat::from_integer(BigUint::from(67u32) << 12usize), cert)
}

/// Certificate for `2^6·31·41 = g(423)·(2^2·7)·(2^2·11)^2`.
pub fn g423_witness() -> (Rat, WooleyCert) {
    let r7 = table1_row(7).expect("row present").cert;
    let r11 = table1_row(11).expect("row present").cert;
    let cert = cert_of(&[(423, 1)]).compose(&r7).compose(&r11.pow(2));
    (Rat::from_integer(BigUint::from(31u32 * 41) << 6usize), cert)
}

/// Certificate for `target` from the embedded corpus: the table rows, the
/// `2^12·67` composite and the `2^6·31·41` witness.
pub fn known_cert(target: &Rat) -> Option<WooleyCert> {
    builtin_table1()
        .into_iter()
        .map(|r| (r.target, r.cert))
        .chain([composite_67_identity(), g423_witness()])
        .find(|(t, _)| t == target)
        .map(|(_, c)| c)
}
