use rmt_core::validate::run_criterion;
fn main() {
    for id in [5u32, 6, 7, 9, 12, 8] {
        let t = std::time::Instant::now();
        let r = run_criterion(id);
        println!("{}  ({:.1}s)", r.line(), t.elapsed().as_secs_f64());
    }
}
