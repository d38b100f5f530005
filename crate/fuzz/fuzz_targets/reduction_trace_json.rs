#![no_main]

use kneser::descent::ReductionTrace;
use libfuzzer_sys::fuzz_target;

// Parsing enforces structural validity, so anything accepted must pass the
// explicit structure check and round-trip to an equal trace.
fuzz_target!(|data: &[u8]| {
    let Ok(t) = ReductionTrace::from_json(data) else { return };
    t.validate_structure().expect("parsed traces are structurally valid");
    let again =
        ReductionTrace::from_json(t.to_json().as_bytes()).expect("reserialized trace must parse");
    assert_eq!(again, t);
});
