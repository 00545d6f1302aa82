#![no_main]

use libfuzzer_sys::fuzz_target;
use ntu::format::{graph_from_spec, td_from_spec, GraphSpec, TdSpec};
use ntu_core::mcippdp::validate_special_td;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<TdSpec>(data) else { return };
    let vertices = ["a", "b", "c", "d", "e"].map(String::from).to_vec();
    let edges = [("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "e"), ("e", "c")]
        .map(|(x, y)| [x.to_string(), y.to_string()])
        .to_vec();
    let g = graph_from_spec(&GraphSpec { vertices, edges }).unwrap();
    if let Ok(td) = td_from_spec(&spec, &g) {
        assert!(validate_special_td(&g, &td).is_valid());
    }
});
