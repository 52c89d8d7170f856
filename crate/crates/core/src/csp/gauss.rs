//! Exact counting for affine languages by elimination over GF(2).

use super::CspInstance;
use crate::error::{Error, Result};
use crate::gf2::{BitRow, Elimination, Gf2System};
use crate::weight::Weight;
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `Z_I` for an instance whose every function is a 0/1 affine relation.
///
/// Each constraint contributes its local system with columns mapped through
/// the scope; a repeated variable collapses its columns by XOR.
pub fn gauss_count<W: Weight>(inst: &CspInstance<W>) -> Result<BigUint> {
    let n = inst.variables();
    let language = inst.boolean_language()?;
    let mut sys = Gf2System::new(n);
    for c in inst.constraints() {
        let f = &language[c.function];
        if f.is_zero() {
            return Ok(BigUint::zero());
        }
        let local = f.affine_system().map_err(|e| match e {
            Error::NotAffine => Error::Domain(format!(
                "function {:?} is not affine",
                inst.function_name(c.function)
            )),
            other => other,
        })?;
        for (row, &rhs) in local.rows.iter().zip(&local.rhs) {
            let mut global = BitRow::zeros(n);
            for (j, &bit) in row.iter().enumerate() {
                if bit {
                    global.flip(c.scope[j]);
                }
            }
            sys.push(global, rhs);
        }
    }
    Ok(match sys.eliminate() {
        Elimination::Inconsistent => BigUint::zero(),
        Elimination::Consistent { rank } => BigUint::one() << (n - rank),
    })
}
