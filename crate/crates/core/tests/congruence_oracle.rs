use noncong_core::analysis::is_congruence;
use noncong_core::oracle::congruence_by_definition;
use noncong_core::pairs::enumerate_classes;

#[test]
fn hsu_matches_definition() {
    for mu in 1..=12 {
        let mut bad = 0;
        let mut cong = 0;
        let e = enumerate_classes(mu);
        for p in e.pairs() {
            let d = congruence_by_definition(&p);
            cong += d as usize;
            if d != is_congruence(&p) {
                bad += 1;
            }
        }
        println!("mu={mu} classes={} congruence={cong} mismatches={bad}", e.keys.len());
        assert_eq!(bad, 0, "mu={mu}");
    }
}
