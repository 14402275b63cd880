fn main() {
    use std::time::Instant;
    let spec = ellsurf_cli::spec::load_spec(std::path::Path::new("crates/ellsurf-cli/fixtures/e1bis.surface")).unwrap();
    let t0 = Instant::now();
    let red = ellsurf_cli::pipeline::reduce_surface(&spec, 11).unwrap();
    eprintln!("reduce@11 {:?}, fibers {}", t0.elapsed(), red.analysis.fibers.len());
    let t0 = Instant::now();
    let lvl = ellsurf_core::counting::Level::build(&red.counting, 1);
    eprintln!("level1 build {:?}", t0.elapsed());
    let t0 = Instant::now();
    let reps = ellsurf_core::counting::level_orbit_reps(&red.counting, &lvl);
    eprintln!("level1 reps {} in {:?}", reps.len(), t0.elapsed());
    let t0 = Instant::now();
    let lvl2 = ellsurf_core::counting::Level::build(&red.counting, 2);
    eprintln!("level2 build {:?}", t0.elapsed());
    let t0 = Instant::now();
    let reps2 = ellsurf_core::counting::level_orbit_reps(&red.counting, &lvl2);
    eprintln!("level2 reps {} in {:?}", reps2.len(), t0.elapsed());
    let t0 = Instant::now();
    let mut nc = ellsurf_core::counting::NoCache;
    let (tv, _) = ellsurf_cli::pipeline::count_surface_parallel(&red.counting, 2, ellsurf_core::counting::Strategy::default(), 1, &mut nc).unwrap();
    eprintln!("count {:?}: {:?}", t0.elapsed(), tv.counts);
}
