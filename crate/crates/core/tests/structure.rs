use brim::error::Error;
use brim::multiplicity::minimal_reduction;
use brim::structure::{adjoint_of_ideal, keylem_check, presentation, psi, reduction_first_presentation};
use brim::verify::corpus::closed_direct_sum;
use brim::{Gf, Ideal, Module, PolyMatrix, Session, Staircase};

fn minors(a: &PolyMatrix<Gf>, k: usize) -> Ideal<Gf> {
    Ideal::new(a.minors(k)).unwrap()
}

#[test]
fn presentations_of_closed_ideals_match_hilbert_burch() {
    let s = Session::default();
    for seed in 0..12 {
        let st = Staircase::random_ic(1 + (seed % 3) as u32, 20, seed).unwrap();
        let m = Module::from_ideal(&Ideal::<Gf>::from_staircase(&st));
        let pres = presentation(&m, &s).unwrap();
        let hb: PolyMatrix<Gf> = st.hilbert_burch().unwrap();
        assert_eq!(pres.a.cols(), m.num_gens() - 1);
        for k in 1..=hb.cols() {
            assert!(pres.minor_ideal(k).unwrap().equals(&minors(&hb, k), &s).unwrap(), "{st}, k = {k}");
        }
    }
}

#[test]
fn ideal_reduction_leaves_n_minus_two_rows() {
    let s = Session::default();
    let m = Module::from_ideal(&Ideal::<Gf>::parse("x^4, x^3*y, x*y^2, y^4").unwrap());
    let cert = minimal_reduction(&m, 5, &s).unwrap();
    let b = reduction_first_presentation(&m, &cert, &s).unwrap().b_block();
    assert_eq!(b.rows(), 2);
    assert!(b.entries().iter().all(|f| f.constant_term() == Default::default()));
    assert_eq!(keylem_check(&m, &cert, &s).unwrap().equal, Some(true));
}

#[test]
fn keylem_on_closed_sums() {
    let s = Session::default();
    for seed in 0..8 {
        let (m, _) = closed_direct_sum::<Gf>(2, 20, seed).unwrap();
        let m = m.minimalized(&s).unwrap();
        let cert = minimal_reduction(&m, seed, &s).unwrap();
        let res = keylem_check(&m, &cert, &s).unwrap();
        assert_eq!(res.equal, Some(true), "seed {seed}: {res:?}");
    }
}

#[test]
fn adjoint_refuses_unclosed_input() {
    let s = Session::default();
    let i = Ideal::<Gf>::parse("x^3, x*y^4, y^6").unwrap();
    assert!(matches!(adjoint_of_ideal(&i, &s), Err(Error::Precondition(_))));
    let dense = Ideal::<Gf>::parse("x^2 + y^3, x*y").unwrap();
    assert!(matches!(adjoint_of_ideal(&dense, &s), Err(Error::Precondition(_))));
}

#[test]
fn psi_rejects_modules_outside_the_class() {
    let s = Session::default();
    let m = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
    assert!(matches!(psi(&m, 1, &s), Err(Error::Precondition(_))));
    let big = Module::from_ideals(&[Ideal::<Gf>::parse("x^2, x*y, y^2").unwrap(), Ideal::maximal()]);
    assert!(matches!(psi(&big, 1, &s), Err(Error::Precondition(_))));
}

#[test]
fn psi_on_ideals_of_order_one() {
    let s = Session::default();
    let m = Module::from_ideal(&Ideal::<Gf>::parse("x, y^3").unwrap());
    let k = psi(&m, 1, &s).unwrap();
    assert_eq!((k.rank(), k.num_gens()), (1, 2));
    assert!(k.ideal().unwrap().equals(&m.ideal().unwrap(), &s).unwrap());
}
