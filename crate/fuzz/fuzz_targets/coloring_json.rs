#![no_main]

use kneser::Coloring;
use libfuzzer_sys::fuzz_target;

// Any accepted input must round-trip byte-for-byte through its reserialized
// form and survive the read-only API without panicking.
fuzz_target!(|data: &[u8]| {
    let Ok(c) = Coloring::from_json(data) else { return };
    let again =
        Coloring::from_json(c.to_json().as_bytes()).expect("reserialized coloring must parse");
    assert_eq!(again.params(), c.params());
    assert_eq!(again.colors(), c.colors());
    let _ = c.star_report();
    // Properness is quadratic in the vertex count; keep per-input work small.
    if c.params().vertex_count() <= 2048 {
        let _ = c.validate();
    }
});
