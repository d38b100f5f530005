#![no_main]

use kneser::tucker::AntipodalMap;
use libfuzzer_sys::fuzz_target;

// An accepted map reserializes, parses back onto an identical ball, and
// labels every position the same way.
fuzz_target!(|data: &[u8]| {
    let Ok((ball, map)) = AntipodalMap::from_json(data) else { return };
    let json = map.to_json(&ball).expect("parsed maps must reserialize");
    let (ball2, map2) =
        AntipodalMap::from_json(json.as_bytes()).expect("reserialized map must parse");
    assert_eq!(ball2.len(), ball.len());
    assert_eq!(map2.widened(), map.widened());
    assert_eq!(map2.rep_labels(), map.rep_labels());
    // Label lookups walk the whole ball; keep per-input work small.
    if ball.len() <= 4096 {
        for pos in 0..ball.len() as u32 {
            assert_eq!(map2.label_at(&ball2, pos), map.label_at(&ball, pos));
        }
    }
});
