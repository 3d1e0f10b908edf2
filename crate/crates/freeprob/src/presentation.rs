use gpsofic_algnum::{crossed_product_generators, CycInt, CycMatrix};

use crate::{NcPoly, ProbError, Variables};

/// Self-adjoint generators of a matrix algebra together with relations
/// that present it, and their values at explicit microstates.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub vars: Variables,
    pub relations: Vec<NcPoly>,
    pub generators: Vec<CycMatrix>,
}

/// `M_n` through the crossed-product unitaries `u`, `v`, written with the
/// self-adjoint variables `s1 = u + u*`, `s2 = i(u* - u)`, `s3 = v + v*`,
/// `s4 = i(v* - v)`, so `u = (s1 + i s2) / 2` and `v = (s3 + i s4) / 2`.
/// The relations say each pair commutes and gives a unitary of order `n`,
/// and `v u = zeta_n^-1 u v`.
pub fn crossed_product_presentation(n: u32) -> Result<Presentation, ProbError> {
    let (u, v) = crossed_product_generators(n)?;
    let i = CycInt::root_of_unity(4, 1)?;
    let hermitian_parts = |x: &CycMatrix| -> Result<(CycMatrix, CycMatrix), ProbError> {
        let re = x.try_add(&x.adjoint())?;
        let im = x.adjoint().try_sub(x)?.scale(&i)?;
        Ok((re, im))
    };
    let (a, b) = hermitian_parts(&u)?;
    let (c, d) = hermitian_parts(&v)?;

    let s = |k: usize| NcPoly::var(k);
    let twice = |re: usize, im: usize| s(re).add(&s(im).scale(&i));
    let scalar = |x: i64| NcPoly::constant(CycInt::from_int(x));
    let mut relations = Vec::new();
    for (re, im) in [(0, 1), (2, 3)] {
        relations.push(s(re).mul(&s(im)).sub(&s(im).mul(&s(re))));
        relations.push(s(re).pow(2).add(&s(im).pow(2)).sub(&scalar(4)));
        relations.push(twice(re, im).pow(n).sub(&scalar(1 << n)));
    }
    let (tu, tv) = (twice(0, 1), twice(2, 3));
    relations.push(
        tv.mul(&tu)
            .sub(&tu.mul(&tv).scale(&CycInt::root_of_unity(n, -1)?)),
    );
    Ok(Presentation {
        vars: Variables::self_adjoint(4),
        relations,
        generators: vec![a, b, c, d],
    })
}
