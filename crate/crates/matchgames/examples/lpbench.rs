use matchgames::game::{bpm_game, pm_game};
use matchgames::graph::{BipartiteGraph, Graph};
use matchgames::nsvalue::ns_perfect;

fn main() {
    for (name, game) in [
        ("PM C7", pm_game(&Graph::cycle(7).unwrap())),
        ("PM K7", pm_game(&Graph::complete(7))),
        ("PM Petersen", pm_game(&Graph::petersen())),
        ("BPM K_{6,6}", bpm_game(&BipartiteGraph::complete(6, 6))),
        ("PM K5", pm_game(&Graph::complete(5))),
        ("BPM K_{5,2}", bpm_game(&BipartiteGraph::complete(5, 2))),
        ("PM K6", pm_game(&Graph::complete(6))),
    ] {
        let t = std::time::Instant::now();
        let r = ns_perfect(&game, false).unwrap();
        println!("{name}: perfect={} in {:?}", r.is_some(), t.elapsed());
    }
}
