//! End-to-end checks of the library against the pinned reference fixtures:
//! the 8-node digraph with known count matrices, and the two-group
//! three-partition construction with its witness graph.

mod common;

use std::collections::BTreeSet;

use common::{components, reference_cdcm_rows, reference_dcm_rows, reference_digraph};
use dcm_core::{
    build_gadget, build_matrix, cdcm_of, cdcm_to_dcm, check_basic, check_predecessor_bounds,
    dcm_of, dcm_to_cdcm, goodness, recognize, screen, solve_tpp, verify_witness, BoundMode,
    Candidate, CdcMatrix, DcMatrix, GoodnessVerdict, MatchPolicy, Orientation,
    PredecessorBoundConfig, RecognitionOutcome, Rule, ScreenReport, SearchLimits, TppInstance,
    TppOutcome,
};

fn exact_cfg() -> PredecessorBoundConfig {
    PredecessorBoundConfig { mode: BoundMode::Exact, budget: 10_000_000 }
}

fn reference_dcm() -> DcMatrix {
    DcMatrix::from_rows(reference_dcm_rows()).unwrap()
}

fn reference_cdcm() -> CdcMatrix {
    CdcMatrix::from_rows(reference_cdcm_rows()).unwrap()
}

#[test]
fn reference_distances_row_one() {
    let g = reference_digraph();
    let row = g.distances_to(1).unwrap();
    assert_eq!(row.level_counts(), vec![1, 1, 2, 2, 2, 0, 0, 0]);
    assert_eq!(g.eccentricity(1).unwrap(), 4);
    assert_eq!(g.diameter(), 4);
    assert!(g.is_strongly_connected());
}

#[test]
fn reference_neighborhood() {
    let g = reference_digraph();
    let xs: BTreeSet<usize> = [1].into_iter().collect();
    let hood = g.neighborhood_set(&xs, 1).unwrap();
    assert_eq!(hood, [1, 7].into_iter().collect::<BTreeSet<_>>());
}

#[test]
fn reference_count_matrices() {
    let g = reference_digraph();
    assert_eq!(dcm_of(&g), reference_dcm());
    assert_eq!(cdcm_of(&g), reference_cdcm());
}

#[test]
fn reference_conversions() {
    assert_eq!(dcm_to_cdcm(&reference_dcm()).unwrap(), reference_cdcm());
    assert_eq!(cdcm_to_dcm(&reference_cdcm()).unwrap(), reference_dcm());
}

#[test]
fn reference_canonical_form() {
    let canon = reference_dcm().canonicalize();
    assert_eq!(canon.row(0), &[1, 1, 2, 2, 2, 0, 0, 0]);
    assert_eq!(canon.canonicalize(), canon);
}

#[test]
fn reference_rows_are_very_good() {
    for row in reference_cdcm_rows() {
        match goodness(&row) {
            GoodnessVerdict::Good { very_good, .. } => assert!(very_good),
            GoodnessVerdict::NotGood => panic!("reference row {row:?} not good"),
        }
    }
    assert_eq!(
        goodness(&reference_cdcm_rows()[0]),
        GoodnessVerdict::Good { plateau_value: 8, plateau_start: 3, very_good: true }
    );
}

#[test]
fn cumulative_column_one_records_in_degrees() {
    let g = reference_digraph();
    let recorded = dcm_core::in_degrees(&reference_cdcm());
    let actual: Vec<u64> = (0..8).map(|i| g.in_degree(i) as u64).collect();
    assert_eq!(recorded, actual);
    assert_eq!(recorded, vec![2, 1, 2, 2, 3, 1, 2, 2]);
}

#[test]
fn reference_passes_screening() {
    let m = reference_cdcm();
    assert!(check_basic(&m, true).passed());
    for cfg in [PredecessorBoundConfig::default(), exact_cfg()] {
        let report = check_predecessor_bounds(&m, &cfg, Orientation::Directed);
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.budget_exhausted_rows.is_empty());
    }
    let n_mat = reference_dcm();
    let report: ScreenReport = screen(Candidate::Dcm(&n_mat), Orientation::Directed, &exact_cfg());
    assert!(report.passed(), "{:?}", report.failures);
}

#[test]
fn reference_dcm_is_recognized_fixed_rows() {
    let n_mat = reference_dcm();
    let out = recognize(Candidate::Dcm(&n_mat), Orientation::Directed, &SearchLimits::default());
    match &out {
        RecognitionOutcome::Yes { witness, stats } => {
            assert!(
                verify_witness(witness, Candidate::Dcm(&n_mat), MatchPolicy::FixedRows).unwrap()
            );
            assert!(stats.expansions > 0);
        }
        other => panic!("expected yes, got {other:?}"),
    }
}

#[test]
fn reference_graph_verifies_as_witness() {
    let g = reference_digraph();
    let n_mat = reference_dcm();
    assert!(verify_witness(&g, Candidate::Dcm(&n_mat), MatchPolicy::FixedRows).unwrap());
    let m_mat = reference_cdcm();
    assert!(verify_witness(&g, Candidate::Cdcm(&m_mat), MatchPolicy::FixedRows).unwrap());
}

fn sample_instance() -> TppInstance {
    TppInstance::new(vec![9, 7, 6, 5, 2, 1]).unwrap()
}

#[test]
fn gadget_reproduces_candidate_matrix() {
    let inst = sample_instance();
    let sol = match solve_tpp(&inst) {
        TppOutcome::Positive(sol) => sol,
        other => panic!("expected positive, got {other:?}"),
    };
    let (graph, _) = build_gadget(&inst, &sol).unwrap();
    let built = build_matrix(&inst).unwrap();
    assert_eq!(dcm_of(&graph), built);
    assert_eq!(dcm_of(&graph).canonicalize(), built.canonicalize());
    assert!(
        verify_witness(&graph, Candidate::Dcm(&built), MatchPolicy::UpToPermutation).unwrap()
    );

    // Two components of 19 nodes each.
    let comp = components(&graph);
    let count = comp.iter().max().unwrap() + 1;
    assert_eq!(count, 2);
    for c in 0..count {
        assert_eq!(comp.iter().filter(|&&x| x == c).count(), 19);
    }
}

#[test]
fn gadget_square_hub_degree() {
    // In the square of the gadget, each hub sees exactly its three value
    // nodes (matching column 2 of the candidate matrix).
    let inst = sample_instance();
    let sol = match solve_tpp(&inst) {
        TppOutcome::Positive(sol) => sol,
        other => panic!("expected positive, got {other:?}"),
    };
    let (graph, layout) = build_gadget(&inst, &sol).unwrap();
    let square = graph.power(2).unwrap();
    for (node, role) in layout.roles().iter().enumerate() {
        if matches!(role, dcm_core::NodeRole::Z { .. }) {
            assert_eq!(square.degree(node), 3);
        }
    }
}

#[test]
fn candidate_matrix_screens_clean_in_undirected_mode() {
    let built = build_matrix(&sample_instance()).unwrap();
    for cfg in [PredecessorBoundConfig::default(), exact_cfg()] {
        let report = screen(Candidate::Dcm(&built), Orientation::Undirected, &cfg);
        assert!(report.passed(), "{:?}", report.failures);
    }
}

#[test]
fn negative_instance_matrix_still_screens_clean() {
    // Screening is only a necessary condition: the candidate matrix of a
    // negative instance sails through the relaxed bounds.
    let neg = TppInstance::new(vec![5, 5, 5, 1, 1, 1]).unwrap();
    assert_eq!(solve_tpp(&neg), TppOutcome::Negative);
    assert!(!common::tpp_oracle(neg.values()));
    let built = build_matrix(&neg).unwrap();
    let report = screen(
        Candidate::Dcm(&built),
        Orientation::Undirected,
        &PredecessorBoundConfig::default(),
    );
    assert!(report.passed(), "{:?}", report.failures);
}

#[test]
fn screening_rejections_are_reported_with_rules() {
    // Goodness violation inside an otherwise plausible matrix.
    let m = CdcMatrix::from_rows(vec![
        vec![1, 2, 2, 3],
        vec![1, 2, 3, 4],
        vec![1, 1, 1, 1],
        vec![1, 4, 4, 4],
    ])
    .unwrap();
    let report = screen(
        Candidate::Cdcm(&m),
        Orientation::Directed,
        &PredecessorBoundConfig::default(),
    );
    assert!(!report.passed());
    assert_eq!(report.failures[0].rule, Rule::Goodness);
}
