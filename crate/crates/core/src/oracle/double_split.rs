//! One ciphertext nibble at a time in a single 4-qubit workspace.
//!
//! Intermediate values are never stored: each one is formed in place inside
//! the key registers, copied into the workspace and immediately undone. The
//! comparisons for nibbles 0, 3 and 2 are parked in three ancillas; nibble 1
//! stays in the workspace for the final phase gate.

use super::expr::{ciphertext_exprs, CipherNibble, Expr};
use super::{nibble, AttackInstance};
use crate::blocks::{qc_add_nibble, qc_add_quantum, qc_mc_split, qc_mc_split_quantum, qc_sbox, McSplit, NibbleWires};
use crate::circuit::{CircuitBuilder, QubitId};
use crate::error::{Error, Result};
use crate::saes::{KeyNibble, RoundConstants};

struct Compiler<'a> {
    b: &'a mut CircuitBuilder,
    registers: [Option<NibbleWires>; 4],
}

impl Compiler<'_> {
    fn register(&self, p: KeyNibble) -> NibbleWires {
        self.registers[p.index()].expect("unleaked key nibbles have registers")
    }

    /// `target ^= e`, every key register left as found.
    fn xor_into(&mut self, target: NibbleWires, e: &Expr) -> Result<()> {
        match e {
            Expr::Const(c) => qc_add_nibble(self.b, target, *c),
            Expr::Key(p) => qc_add_quantum(self.b, &self.register(*p), &target),
            Expr::Xor(terms) => terms.iter().try_for_each(|t| self.xor_into(target, t)),
            Expr::Sbox(_) | Expr::Mix { .. } => {
                let mark = self.b.checkpoint();
                let w = self.materialize(e)?;
                let computed = self.b.checkpoint();
                qc_add_quantum(self.b, &w, &target)?;
                self.b.append_inverse_between(mark, computed);
                Ok(())
            }
        }
    }

    /// Overwrites one of the registers `e` depends on with the value of `e`.
    /// Only registers in `e.deps()` are touched.
    fn materialize(&mut self, e: &Expr) -> Result<NibbleWires> {
        match e {
            Expr::Const(_) => Err(Error::Unhostable(e.to_string())),
            Expr::Key(p) => Ok(self.register(*p)),
            Expr::Sbox(inner) => {
                let w = self.materialize(inner)?;
                qc_sbox(self.b, w)?;
                Ok(w)
            }
            Expr::Xor(terms) => {
                let deps_without = |i: usize| {
                    terms
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .fold(0, |d, (_, t)| d | t.deps())
                };
                let hostable = |i: usize| {
                    let d = terms[i].deps();
                    d != 0 && d & deps_without(i) == 0
                };
                let host = (0..terms.len())
                    .filter(|&i| hostable(i))
                    .min_by_key(|&i| !matches!(terms[i], Expr::Key(_)))
                    .ok_or_else(|| Error::Unhostable(e.to_string()))?;
                let w = self.materialize(&terms[host])?;
                for (i, t) in terms.iter().enumerate() {
                    if i != host {
                        self.xor_into(w, t)?;
                    }
                }
                Ok(w)
            }
            Expr::Mix { output, column } => {
                let [hi, lo] = &**column;
                match (hi.as_const(), lo.as_const()) {
                    (Some(c), _) => {
                        let w = self.materialize(lo)?;
                        qc_mc_split(self.b, McSplit::new(*output, 0), c, w)?;
                        Ok(w)
                    }
                    (_, Some(c)) => {
                        let w = self.materialize(hi)?;
                        qc_mc_split(self.b, McSplit::new(*output, 1), c, w)?;
                        Ok(w)
                    }
                    _ if hi.deps() & lo.deps() != 0 => Err(Error::Unhostable(e.to_string())),
                    _ => {
                        let held = self.materialize(hi)?;
                        let moving = self.materialize(lo)?;
                        qc_mc_split_quantum(self.b, McSplit::new(*output, 0), held, moving)?;
                        Ok(moving)
                    }
                }
            }
        }
    }

    /// Leaves `w ^ !expected` in the workspace, all ones exactly on a match.
    fn ciphertext_nibble(&mut self, w: NibbleWires, n: &CipherNibble, expected: crate::saes::Nibble) -> Result<()> {
        self.xor_into(w, &n.pre_sbox)?;
        qc_sbox(self.b, w)?;
        self.xor_into(w, &n.round_key)?;
        qc_add_nibble(self.b, w, expected.complement())
    }
}

pub(super) fn forward(
    b: &mut CircuitBuilder,
    inst: &AttackInstance,
    rc: RoundConstants,
    key: &[QubitId],
    text: &[QubitId],
    anc: &[QubitId],
) -> Result<Vec<QubitId>> {
    let mut registers = [None; 4];
    for (i, p) in inst.leak.searched().into_iter().enumerate() {
        registers[p.index()] = Some(nibble(key, i));
    }
    let exprs = ciphertext_exprs(inst.plaintext, &inst.leak, rc);
    let w = nibble(text, 0);
    let c = inst.ciphertext;
    let mut compiler = Compiler { b, registers };
    for (n, flag) in [(0, anc[0]), (3, anc[2]), (2, anc[1])] {
        let mark = compiler.b.checkpoint();
        compiler.ciphertext_nibble(w, &exprs[n], c.nibble(n))?;
        let computed = compiler.b.checkpoint();
        compiler.b.mcx(&w, flag)?;
        compiler.b.append_inverse_between(mark, computed);
    }
    compiler.ciphertext_nibble(w, &exprs[1], c.nibble(1))?;
    Ok([anc, &w[..]].concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{emulate, read_register, write_register, PhasedBasisState};
    use crate::saes::{Block, Key, LeakConfig};

    fn check(e: &Expr, leak: &LeakConfig, key: Key) {
        let searched = leak.searched();
        let mut b = CircuitBuilder::new(&[("key", 4 * searched.len()), ("w", 4)]).unwrap();
        let kreg: Vec<QubitId> = b.register("key").unwrap().to_vec();
        let w = nibble(b.register("w").unwrap(), 0);
        let mut registers = [None; 4];
        for (i, p) in searched.iter().enumerate() {
            registers[p.index()] = Some(nibble(&kreg, i));
        }
        let mut c = Compiler { b: &mut b, registers };
        c.xor_into(w, e).unwrap();
        let circuit = b.finish();
        let kappa = leak.project(key) as u64;
        let bits = write_register(0, &kreg, kappa);
        let out = emulate(PhasedBasisState::new(circuit.qubit_count(), bits), &circuit).unwrap();
        assert_eq!(read_register(out.bits, &kreg), kappa, "key clobbered by {e}");
        assert_eq!(read_register(out.bits, &w) as u8, e.eval(key).value(), "{e}");
    }

    #[test]
    fn xor_into_evaluates_every_ciphertext_expression() {
        let key = Key::from_u16(0xA73B);
        let leak = LeakConfig::none();
        fn walk(e: &Expr, f: &mut impl FnMut(&Expr)) {
            match e {
                Expr::Sbox(i) => walk(i, f),
                Expr::Xor(ts) => ts.iter().for_each(|t| walk(t, f)),
                Expr::Mix { column, .. } => column.iter().for_each(|t| walk(t, f)),
                _ => {}
            }
            f(e);
        }
        for n in ciphertext_exprs(Block::from_u16(0x6F6B), &leak, RoundConstants::STANDARD) {
            walk(&n.round_key, &mut |e| check(e, &leak, key));
            walk(&n.pre_sbox, &mut |e| check(e, &leak, key));
        }
    }
}
