use xg_core::adjustment::*;
use xg_core::evaluation::*;
use xg_core::features::*;
use xg_core::ingest::*;
use xg_core::models::*;

fn main() {
    let t0 = std::time::Instant::now();
    let dir = tempfile_dir();
    let summary = xg_testkit::generate(&dir, &xg_testkit::SynthConfig::paper_scale(42)).unwrap();
    println!("gen: {summary:?} in {:?}", t0.elapsed());

    let corpus = load_corpus(&dir, &CorpusFilter::default()).unwrap();
    let shots = filter_open_play(corpus.shots);
    println!("open play shots: {} (goals {})", shots.len(), shots.iter().filter(|s| s.is_goal).count());

    let feet = infer_dominant_foot(&shots);
    let t1 = std::time::Instant::now();
    let enc_e = fit_encoder(&shots, &FeatureConfig::enriched(), &feet).unwrap();
    let m_e = transform(&shots, &enc_e, &feet);
    let enc_b = fit_encoder(&shots, &FeatureConfig::baseline(), &feet).unwrap();
    let m_b = transform(&shots, &enc_b, &feet);
    println!("features in {:?}", t1.elapsed());
    let benchmark: Vec<f64> = shots.iter().map(|s| s.statsbomb_xg).collect();

    // positional counts
    let posmap = PositionMap::default();
    let table = position_table(&shots, &[], &posmap);
    for row in &table.rows {
        println!("{:<12} shots {:>6} goals {:>5} s/g {:.2}", row.group.label(), row.shots, row.goals, row.shots_per_goal);
    }

    let t2 = std::time::Instant::now();
    let gb = train_gbdt(&m_e, &GbdtHyper::default()).unwrap();
    println!("gbdt enriched trained in {:?} (final loss {:.4})", t2.elapsed(), gb.meta.final_train_log_loss);
    let gb_art = ModelArtifact::Gbdt(gb);
    let rep = evaluate_model("gbdt-enriched", &gb_art, &m_e, &benchmark).unwrap();
    println!("gbdt enriched: sum {:.1} goals {} pearson {:.4} fit ({:.3},{:.3})", rep.accumulated_xg, rep.total_goals, rep.pearson_r, rep.fit.intercept, rep.fit.slope);

    let t3 = std::time::Instant::now();
    let lh = LogisticHyper { learning_rate: 3.0, max_iters: 4000, tol: 1e-12, l2: 0.0, seed: 42 };
    let lg_b = train_logistic(&m_b, &lh).unwrap();
    println!("logistic baseline in {:?} iters {}", t3.elapsed(), lg_b.meta.iterations_run);
    let rep_b = evaluate_model("logistic-baseline", &ModelArtifact::Logistic(lg_b), &m_b, &benchmark).unwrap();
    println!("baseline logistic: sum {:.1} pearson {:.4}", rep_b.accumulated_xg, rep_b.pearson_r);

    let lg_e = train_logistic(&m_e, &lh).unwrap();
    let rep_le = evaluate_model("logistic-enriched", &ModelArtifact::Logistic(lg_e), &m_e, &benchmark).unwrap();
    println!("enriched logistic: sum {:.1} pearson {:.4}", rep_le.accumulated_xg, rep_le.pearson_r);

    // adjustments
    let hyper = GbdtHyper::default();
    for group in [PositionGroup::Forward, PositionGroup::Midfield, PositionGroup::Defender] {
        let t = std::time::Instant::now();
        let adj = train_adjusted(&m_e, &shots, &SubsetSpec::ByPosition { group }, &posmap, &hyper, 200).unwrap();
        let res = apply_adjustment(&gb_art, &adj, &m_e).unwrap();
        println!("{:<10} adjusted {:.0} base {:.0} delta {:+.0} (subset {}) in {:?}", group.label(), res.adjusted_xg, res.base_xg, res.adjustment, res.subset_size, t.elapsed());
    }
    let messi = xg_testkit::MESSI_PLAYER_ID;
    let adj = train_adjusted(&m_e, &shots, &SubsetSpec::ByPlayer { player_id: messi }, &posmap, &hyper, 200).unwrap();
    let non_messi: Vec<usize> = shots.iter().enumerate().filter(|(_, s)| s.player_id != messi).map(|(i, _)| i).collect();
    let target = m_e.select_rows(&non_messi);
    let res = apply_adjustment(&gb_art, &adj, &target).unwrap();
    println!("messi: adjusted {:.0} base {:.0} delta {:+.0} ({:.1}%) subset {}", res.adjusted_xg, res.base_xg, res.adjustment, 100.0 * res.adjustment / res.base_xg, res.subset_size);
    println!("total: {:?}", t0.elapsed());
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("xg-stats-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
