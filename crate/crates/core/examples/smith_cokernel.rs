//! Elementary divisors and cokernel structure of an integer matrix over Z_3.

use iwasawa::padic_linalg::{certified_cokernel, cokernel_structure, smith_normal_form, PAdicContext, ZpMatrix};

fn main() -> iwasawa::Result<()> {
    let ctx = PAdicContext::new(3, 20, 4)?;
    let a = ZpMatrix::from_i64_rows(&ctx, &[vec![9, 3, 0], vec![0, 6, 27], vec![2, 0, 1]])?;
    let snf = smith_normal_form(&a, true);
    println!("valuations: {:?}", snf.valuations);
    let t = snf.transforms.as_ref().expect("requested");
    let d = t.left.mul(&a)?.mul(&t.right)?;
    println!("left * A * right is diagonal: {}", (0..3).all(|i| (0..3).all(|j| i == j || d.get(i, j) == 0)));
    let coker = cokernel_structure(&a);
    println!("coker(A) = {coker}, e = {}", coker.e());

    // A zero divisor at precision N could be a deep p-power; rebuilding the
    // matrix modulo a shadow prime decides the rank.
    let b = |c: &PAdicContext| ZpMatrix::from_i64_rows(c, &[vec![3, 0], vec![0, 0]]);
    println!("coker(B) = {}", cokernel_structure(&b(&ctx)?));
    println!("coker(B) = {}", certified_cokernel(&ctx, &b)?);
    Ok(())
}
