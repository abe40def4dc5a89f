use sbc::engine::Engine;
use sbc::gen;
use sbc::gn::{girvan_newman, gn_reference, top_edge};
use sbc::incremental::{EdgeEvent, UpdateOptions};
use sbc::oracle::oracle_scores;

#[test]
fn both_routes_build_the_same_dendrogram() {
    for seed in 0..50u64 {
        let n = 6 + (seed as usize * 7) % 55;
        let m = (n as f64 * 1.8) as usize;
        let g = gen::gnm(n, m, 1000 + seed);

        let inc = girvan_newman(&g, usize::MAX, 1 + (seed as usize % 4), UpdateOptions::default())
            .unwrap();
        let re = gn_reference(&g, usize::MAX).unwrap();

        assert_eq!(inc.rows.len(), re.rows.len(), "seed {seed}: length");
        for (a, b) in inc.rows.iter().zip(&re.rows) {
            assert_eq!((a.step, a.edge, a.components), (b.step, b.edge, b.components),
                "seed {seed}: step {}", a.step);
            let scale = a.ebc.abs().max(1.0);
            assert!(
                (a.ebc - b.ebc).abs() <= 1e-9 * scale,
                "seed {seed}: ebc drift at step {}: {} vs {}",
                a.step,
                a.ebc,
                b.ebc
            );
        }
        assert_eq!(inc.splits, re.splits, "seed {seed}: split membership");

        let last = inc.rows.last().unwrap();
        assert_eq!(last.components, g.vertex_count(), "seed {seed}: singletons");
    }
}

#[test]
fn early_stop_honors_the_target_component_count() {
    let g = gen::connected_gnm(40, 70, 7);
    let d = girvan_newman(&g, 5, 2, UpdateOptions::default()).unwrap();
    let last = d.rows.last().unwrap();
    assert!(last.components >= 5);
    assert!(d.rows[d.rows.len() - 2].components < 5, "stopped late");

    let r = gn_reference(&g, 5).unwrap();
    assert_eq!(d.removed_edges(), r.removed_edges());
}

/// Inside the removal loop the maintained scores must stay on the oracle;
/// spot-checked every fifth iteration to keep the runtime sane.
#[test]
fn maintained_scores_stay_exact_through_the_loop() {
    let g = gen::connected_gnm(48, 90, 11);
    let mut engine = Engine::in_memory(g, 2, UpdateOptions::default());
    let mut iter = 0;
    while engine.graph().edge_count() > 0 {
        let (edge, _) = top_edge(engine.scores()).unwrap();
        engine.apply_event(&EdgeEvent::remove(edge.u, edge.v)).unwrap();
        iter += 1;
        if iter % 5 == 0 {
            let want = oracle_scores(engine.graph()).unwrap();
            let dev = engine.scores().deviation_from(&want);
            assert!(dev.max() < 1e-9, "iteration {iter}: {dev:?}");
        }
    }
    assert!(iter >= 50, "fixture too small to be interesting");
}
