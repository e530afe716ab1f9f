//! Nibble-level symbolic form of S-AES, with leaked key nibbles folded in.
//!
//! Every ciphertext nibble is `S(v) ^ r` where `v` and `r` are XOR sums of
//! constants, key nibbles, S-box images and single MixColumns outputs. The
//! double-split oracle compiles these expressions to circuits.

use std::fmt;

use crate::saes::{mix_columns_byte, sbox, Block, Byte, Key, KeyNibble, LeakConfig, Nibble, RoundConstants};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Const(Nibble),
    Key(KeyNibble),
    Sbox(Box<Expr>),
    /// Sorted, at least two terms, no constant zero, no repeated term.
    Xor(Vec<Expr>),
    /// Nibble `output` of MixColumns applied to the column `(hi, lo)`.
    Mix {
        output: usize,
        column: Box<[Expr; 2]>,
    },
}

impl Expr {
    pub fn key(pos: KeyNibble, leak: &LeakConfig) -> Expr {
        match leak.get(pos) {
            Some(v) => Expr::Const(v),
            None => Expr::Key(pos),
        }
    }

    pub fn sbox(e: Expr) -> Expr {
        match e {
            Expr::Const(c) => Expr::Const(sbox(c)),
            e => Expr::Sbox(Box::new(e)),
        }
    }

    pub fn xor(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut constant = Nibble::ZERO;
        let mut rest = Vec::new();
        for t in terms {
            match t {
                Expr::Const(c) => constant = constant ^ c,
                Expr::Xor(inner) => {
                    for u in inner {
                        match u {
                            Expr::Const(c) => constant = constant ^ c,
                            u => rest.push(u),
                        }
                    }
                }
                t => rest.push(t),
            }
        }
        rest.sort();
        let mut terms: Vec<Expr> = Vec::with_capacity(rest.len() + 1);
        for t in rest {
            if terms.last() == Some(&t) {
                terms.pop();
            } else {
                terms.push(t);
            }
        }
        if constant != Nibble::ZERO {
            terms.push(Expr::Const(constant));
            terms.sort();
        }
        match terms.len() {
            0 => Expr::Const(Nibble::ZERO),
            1 => terms.pop().unwrap(),
            _ => Expr::Xor(terms),
        }
    }

    pub fn mix(output: usize, hi: Expr, lo: Expr) -> Expr {
        match (&hi, &lo) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(mix_columns_byte(Byte::new(*a, *b)).nibble(output)),
            _ => Expr::Mix {
                output,
                column: Box::new([hi, lo]),
            },
        }
    }

    pub fn as_const(&self) -> Option<Nibble> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Key nibbles the expression reads, as a bit set over `KeyNibble::index`.
    pub fn deps(&self) -> u8 {
        match self {
            Expr::Const(_) => 0,
            Expr::Key(p) => 1 << p.index(),
            Expr::Sbox(e) => e.deps(),
            Expr::Xor(ts) => ts.iter().fold(0, |d, t| d | t.deps()),
            Expr::Mix { column, .. } => column[0].deps() | column[1].deps(),
        }
    }

    pub fn eval(&self, key: Key) -> Nibble {
        match self {
            Expr::Const(c) => *c,
            Expr::Key(p) => key.nibble(*p),
            Expr::Sbox(e) => sbox(e.eval(key)),
            Expr::Xor(ts) => ts.iter().fold(Nibble::ZERO, |acc, t| acc ^ t.eval(key)),
            Expr::Mix { output, column } => {
                mix_columns_byte(Byte::new(column[0].eval(key), column[1].eval(key))).nibble(*output)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Key(p) => write!(f, "{p}"),
            Expr::Sbox(e) => write!(f, "S({e})"),
            Expr::Xor(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" ^ "))
            }
            Expr::Mix { output, column } => {
                write!(f, "MC{}[{}, {}]", output, column[0], column[1])
            }
        }
    }
}

/// Ciphertext nibble `n` as `S(pre_sbox) ^ round_key`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherNibble {
    pub pre_sbox: Expr,
    pub round_key: Expr,
}

impl CipherNibble {
    pub fn eval(&self, key: Key) -> Nibble {
        sbox(self.pre_sbox.eval(key)) ^ self.round_key.eval(key)
    }
}

type ByteExpr = [Expr; 2];

fn xor_bytes(a: &ByteExpr, b: &ByteExpr) -> ByteExpr {
    [
        Expr::xor([a[0].clone(), b[0].clone()]),
        Expr::xor([a[1].clone(), b[1].clone()]),
    ]
}

fn const_byte(c: Byte) -> ByteExpr {
    [Expr::Const(c.hi), Expr::Const(c.lo)]
}

fn sub_rot(x: &ByteExpr) -> ByteExpr {
    [Expr::sbox(x[1].clone()), Expr::sbox(x[0].clone())]
}

/// Round-key bytes B0..B5 as expressions.
pub fn round_key_exprs(leak: &LeakConfig, rc: RoundConstants) -> [ByteExpr; 6] {
    let k = |p| Expr::key(p, leak);
    let b0 = [k(KeyNibble::B0Hi), k(KeyNibble::B0Lo)];
    let b1 = [k(KeyNibble::B1Hi), k(KeyNibble::B1Lo)];
    let b2 = xor_bytes(&xor_bytes(&const_byte(rc.c0), &b0), &sub_rot(&b1));
    let b3 = xor_bytes(&b1, &b2);
    let b4 = xor_bytes(&xor_bytes(&const_byte(rc.c1), &b2), &sub_rot(&b3));
    let b5 = xor_bytes(&b3, &b4);
    [b0, b1, b2, b3, b4, b5]
}

/// The four ciphertext nibbles of `encrypt(p, key)` as expressions in the
/// unleaked key nibbles.
pub fn ciphertext_exprs(p: Block, leak: &LeakConfig, rc: RoundConstants) -> [CipherNibble; 4] {
    let [b0, b1, b2, b3, b4, b5] = round_key_exprs(leak, rc);
    let rk0 = [&b0[0], &b0[1], &b1[0], &b1[1]];
    let rk1 = [&b2[0], &b2[1], &b3[0], &b3[1]];
    let s: Vec<Expr> = (0..4)
        .map(|i| Expr::sbox(Expr::xor([Expr::Const(p.nibble(i)), rk0[i].clone()])))
        .collect();
    // After ShiftRows the columns are (s0, s3) and (s2, s1).
    let u = [
        Expr::mix(0, s[0].clone(), s[3].clone()),
        Expr::mix(1, s[0].clone(), s[3].clone()),
        Expr::mix(0, s[2].clone(), s[1].clone()),
        Expr::mix(1, s[2].clone(), s[1].clone()),
    ];
    let v: Vec<Expr> = (0..4).map(|i| Expr::xor([u[i].clone(), rk1[i].clone()])).collect();
    // The final ShiftRows routes v0, v3, v2, v1 to ciphertext nibbles 0..3.
    let nib = |pre: usize, rk: &Expr| CipherNibble {
        pre_sbox: v[pre].clone(),
        round_key: rk.clone(),
    };
    [nib(0, &b4[0]), nib(3, &b4[1]), nib(2, &b5[0]), nib(1, &b5[1])]
}
