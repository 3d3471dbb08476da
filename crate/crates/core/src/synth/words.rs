use rand::seq::SliceRandom;
use rand::Rng;

const ONSETS: &[&str] = &[
    "B", "BR", "C", "CH", "D", "DR", "F", "G", "GR", "H", "J", "K", "KL", "L", "M", "N", "P", "PL",
    "R", "S", "SH", "ST", "T", "TR", "V", "W", "Z",
];
const VOWELS: &[&str] = &["A", "E", "I", "O", "U", "AI", "EO", "OU"];
const CODAS: &[&str] = &["", "", "", "N", "R", "S", "X", "L", "M", "K"];

/// A pronounceable uppercase pseudo-word with `min..=max` syllables.
pub(crate) fn pseudo_word<R: Rng>(rng: &mut R, min: usize, max: usize) -> String {
    let syllables = rng.gen_range(min..=max);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(ONSETS.choose(rng).unwrap());
        w.push_str(VOWELS.choose(rng).unwrap());
    }
    w.push_str(CODAS.choose(rng).unwrap());
    w
}

/// Valid-looking IPC subclass codes, `n` of them, distinct and sorted.
pub(crate) fn ipc_codes(n: usize) -> Vec<String> {
    const SECTIONS: &[u8] = b"ABCDEFGH";
    let mut out = Vec::with_capacity(n);
    'outer: for s in SECTIONS {
        for class in 1..=99u32 {
            for sub in b'A'..=b'Z' {
                if out.len() == n {
                    break 'outer;
                }
                // spread codes over classes rather than filling one class first
                if (class as u8 + sub) % 3 != 0 {
                    continue;
                }
                out.push(format!("{}{class:02}{}", *s as char, sub as char));
            }
        }
    }
    assert_eq!(out.len(), n, "code universe too small");
    out.sort();
    out
}
