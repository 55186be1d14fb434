use matchgames::enumerate::canonical_graphs;
use matchgames::fpm::fractional_pm;
use matchgames::graph::{double_cover, l_perfect_matching, LMatchingOutcome};
use matchgames::packing::classical_pm_alpha_check;
use rayon::prelude::*;

fn main() {
    let t = std::time::Instant::now();
    let g8 = canonical_graphs(8);
    println!("enumerate 8: {:?}", t.elapsed());
    let t = std::time::Instant::now();
    let ok = g8.par_iter().all(|g| classical_pm_alpha_check(g).unwrap());
    println!("prop 2.22 at 8: all={ok} in {:?}", t.elapsed());
    let t = std::time::Instant::now();
    let ok = g8.par_iter().all(|g| {
        let fpm = fractional_pm(g).is_some();
        let lm = matches!(l_perfect_matching(&double_cover(g)), LMatchingOutcome::Matching(_));
        fpm == lm
    });
    println!("fpm/double-cover lemma at 8: all={ok} in {:?}", t.elapsed());
}
