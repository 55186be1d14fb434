use matchgames::enumerate::connected_canonical_graphs;
use matchgames::fpm::triangle_avoiding_fpm;
use matchgames::game::pm_game;
use matchgames::nsvalue::ns_perfect;
use rayon::prelude::*;

fn main() {
    let t = std::time::Instant::now();
    let mut graphs = Vec::new();
    for n in 1..=7 {
        graphs.extend(connected_canonical_graphs(n));
    }
    println!("{} connected graphs in {:?}", graphs.len(), t.elapsed());
    let t = std::time::Instant::now();
    let bad: Vec<String> = graphs
        .par_iter()
        .filter_map(|g| {
            let ns = ns_perfect(&pm_game(g), false).unwrap().is_some();
            let fpm = triangle_avoiding_fpm(g).is_some();
            if ns != fpm {
                Some(format!("mismatch on {:?}", g.edges()))
            } else {
                None
            }
        })
        .collect();
    println!("ns sweep: {} mismatches in {:?}", bad.len(), t.elapsed());
}
