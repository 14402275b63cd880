use ellsurf_core::counting::{surface_count, CountingSurface, NoCache, Strategy};
use ellsurf_core::field::Rationals;
use ellsurf_core::finite::ExtField;
use ellsurf_core::kodaira::{analyze_surface, ff_place_factoring};
use ellsurf_core::poly::Poly;
use ellsurf_core::ratfunc::RatFunc;
use ellsurf_core::weierstrass::{integral_model, reduce_model_mod_p, Curve, FunctionField};

#[test]
fn e1prime_mod17_count_table() {
    let q = Rationals;
    let ff = FunctionField::new(q);
    // E1' : y^2 = x (x - (1-5t)(t-1)^2)(x - 4t(1-5t))
    let r = Poly::mul(
        &q,
        &Poly::from_i64(&q, &[1, -5]),
        &Poly::from_i64(&q, &[1, -2, 1]),
    );
    let s = Poly::mul(&q, &Poly::from_i64(&q, &[1, -5]), &Poly::from_i64(&q, &[0, 4]));
    let model = integral_model(&Curve::new(
        ff,
        RatFunc::of_poly(&q, r),
        RatFunc::of_poly(&q, s),
    ));
    let f17 = ExtField::new(17, 1);
    let red = reduce_model_mod_p(&model.curve, &f17).unwrap();
    let red_int = integral_model(&red);
    let analysis = analyze_surface(&red_int, &ff_place_factoring(f17.clone())).unwrap();
    for (f, d) in &analysis.fibers {
        eprintln!("place {:?} deg {} kind {} split {:?}", f.place.render(&f17), d, f.kind.symbol(), f.splitness);
    }
    let surface = CountingSurface::new(&red_int, &analysis).unwrap();
    let t0 = std::time::Instant::now();
    let tv = surface_count(&surface, 3, Strategy::default(), &mut NoCache).unwrap();
    eprintln!("m<=3 in {:?}", t0.elapsed());
    assert_eq!(tv.counts, vec![604, 88312, 24227740]);
    let t0 = std::time::Instant::now();
    let tv = surface_count(&surface, 4, Strategy::default(), &mut NoCache).unwrap();
    eprintln!("m<=4 in {:?}", t0.elapsed());
    assert_eq!(
        tv.counts,
        vec![604, 88312, 24227740, 6977057176]
    );
}
