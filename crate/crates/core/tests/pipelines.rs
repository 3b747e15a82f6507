use linkforge_core::linkalg::verify_conclusion;
use linkforge_core::pipelines::{
    bipartite_orchestrate, replay, stitch_links, theorem_modq_run, ExhaustiveOracle, SupplierSpec,
    SymbolicPrefixOracle,
};
use linkforge_core::{Int, StitchInput};

#[test]
fn stitch_input_and_trace_survive_json() {
    for seed in 0..20 {
        let input = StitchInput::random_minimal(2, 1, 3, 4, seed).unwrap();
        let input: StitchInput = serde_json::from_str(&serde_json::to_string(&input).unwrap()).unwrap();
        let (out, trace) = stitch_links(&input).unwrap();
        assert!(verify_conclusion(&out.z, 3));
        let trace = serde_json::from_str(&serde_json::to_string(&trace).unwrap()).unwrap();
        assert_eq!(replay(&input, &trace).unwrap(), out);
    }
}

#[test]
fn bipartite_links_every_key_to_every_ring() {
    let res = bipartite_orchestrate(1, &mut ExhaustiveOracle::new(5)).unwrap();
    assert_eq!(res.stages.len(), 1);
    assert_eq!(res.system.lk("Z1", "R1").unwrap(), Int::from(1));

    let res = bipartite_orchestrate(3, &mut SymbolicPrefixOracle { r: 3 }).unwrap();
    for j in 1..=3 {
        for i in 1..=3 {
            assert_eq!(res.system.lk(&format!("Z{j}"), &format!("R{i}")).unwrap(), Int::from(1));
        }
    }
}

#[test]
fn modq_step_produces_a_q_divisible_component() {
    for q in 1..=3 {
        let (system, steps) = theorem_modq_run(1, 1, 1, 1, q, &SupplierSpec::seeded(q, -4, 4), 7).unwrap();
        let step = &steps[0];
        assert!(verify_conclusion(&step.z, q));
        assert!(system.system.component(&step.z_id).is_ok());
    }
}
