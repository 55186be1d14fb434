fn main() {
    let t = std::time::Instant::now();
    let g8 = matchgames::enumerate::canonical_graphs(8);
    println!("n=8: {} graphs in {:?}", g8.len(), t.elapsed());
    let conn = g8.iter().filter(|g| g.is_connected()).count();
    println!("connected: {conn}");
}
