//! Small named codes used by tests, the demo page and documentation.

use crate::code::LinearCode;
use crate::gf::Field;
use crate::linalg::GFMatrix;

#[derive(Debug, Clone)]
pub struct NamedCode {
    pub name: String,
    pub code: LinearCode,
}

fn field(p: u32, m: u32) -> Field {
    Field::new(p, m, None).expect("built-in field")
}

fn from_rows(f: &Field, rows: &[&[u32]]) -> LinearCode {
    LinearCode::new(GFMatrix::from_rows(f, rows).expect("well-formed rows")).expect("full rank")
}

fn named(name: &str, code: LinearCode) -> NamedCode {
    NamedCode {
        name: name.to_string(),
        code,
    }
}

/// `[n,1,n]_q` repetition codes for `q ∈ {2,3,4}`, `n ∈ {3,4,5}`.
pub fn repetition_codes() -> Vec<NamedCode> {
    let mut out = Vec::new();
    for (p, m) in [(2, 1), (3, 1), (2, 2)] {
        let f = field(p, m);
        for n in 3..=5 {
            let code = LinearCode::repetition(&f, n).expect("repetition code");
            out.push(named(&format!("repetition [{n},1,{n}]_{}", f.q()), code));
        }
    }
    out
}

/// Codes with `q ≤ 4` and `n ≤ 6`, mixing MDS and non-MDS examples.
pub fn small_codes() -> Vec<NamedCode> {
    let f2 = field(2, 1);
    let f3 = field(3, 1);
    let f4 = field(2, 2);
    let mut out = repetition_codes();
    out.extend([
        named("identity [2,2,1]_2", LinearCode::identity(&f2, 2).unwrap()),
        named("identity [3,3,1]_3", LinearCode::identity(&f3, 3).unwrap()),
        named("parity [3,2,2]_2", from_rows(&f2, &[&[1, 0, 1], &[0, 1, 1]])),
        named("parity [3,2,2]_3", from_rows(&f3, &[&[1, 0, 1], &[0, 1, 1]])),
        named("split [4,2,2]_2", from_rows(&f2, &[&[1, 0, 1, 0], &[0, 1, 0, 1]])),
        named(
            "shortened Hamming [6,3,3]_2",
            from_rows(
                &f2,
                &[&[1, 0, 0, 1, 1, 0], &[0, 1, 0, 1, 0, 1], &[0, 0, 1, 0, 1, 1]],
            ),
        ),
        named("tetracode [4,2,3]_3", from_rows(&f3, &[&[1, 0, 1, 1], &[0, 1, 1, 2]])),
        // Evaluations of 1 and x at 0, 1, α, α+1.
        named("Reed-Solomon [4,2,3]_4", from_rows(&f4, &[&[1, 1, 1, 1], &[0, 1, 2, 3]])),
        named(
            "[5,2,3]_3",
            from_rows(&f3, &[&[1, 0, 1, 1, 1], &[0, 1, 1, 2, 0]]),
        ),
    ]);
    out
}
