use unicode_normalization::UnicodeNormalization;

/// Canonical form of transcript text: BOM stripped, NFC, whitespace runs collapsed
/// to one space, ends trimmed. Segmentation atoms are characters of this form.
pub fn normalize_text(input: &str) -> String {
    let input = input.strip_prefix('\u{feff}').unwrap_or(input);
    let nfc: String = input.nfc().collect();
    nfc.split_whitespace().collect::<Vec<_>>().join(" ")
}
