//! Levenshtein edit distance over Unicode scalar values.

/// Number of single-character insertions, deletions and substitutions needed
/// to turn `a` into `b`.
pub fn levenshtein(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    // Keep the shorter string in the inner dimension.
    let (outer, inner) = if a.len() >= b.len() { (a, b) } else { (b, a) };

    let mut row: Vec<usize> = (0..=inner.len()).collect();
    for (i, &oc) in outer.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &ic) in inner.iter().enumerate() {
            let above = row[j + 1];
            let cost = usize::from(oc != ic);
            row[j + 1] = (above + 1).min(row[j] + 1).min(diag + cost);
            diag = above;
        }
    }
    row[inner.len()]
}

/// Edit distance divided by the longer length; 0 when both are empty.
pub fn normalized_levenshtein(a: &[char], b: &[char]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 0.0;
    }
    levenshtein(a, b) as f64 / longest as f64
}
