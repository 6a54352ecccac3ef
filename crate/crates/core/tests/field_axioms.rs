//! Exhaustive field-law checks on every supported field of order at most 64.

use qshare_core::gf::Field;

fn fields_up_to_64() -> Vec<Field> {
    let mut out = Vec::new();
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61] {
        out.push(Field::prime(p).unwrap());
    }
    for (p, m) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)] {
        out.push(Field::new(p, m, None).unwrap());
    }
    out
}

#[test]
fn ring_laws_hold_exhaustively() {
    for f in fields_up_to_64() {
        let q = f.q();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a, "{f}");
            assert_eq!(f.mul(a, 1), a, "{f}");
            assert_eq!(f.mul(a, 0), 0, "{f}");
            assert_eq!(f.add(a, f.neg(a)), 0, "{f}");
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a), "{f}");
                assert_eq!(f.mul(a, b), f.mul(b, a), "{f}");
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)), "{f}");
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)), "{f}");
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c)),
                        "{f}"
                    );
                }
            }
        }
    }
}

#[test]
fn inverses_agree_between_euclid_and_fermat() {
    for f in fields_up_to_64() {
        assert_eq!(f.inv(0), None);
        for a in 1..f.q() {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1, "{f} a={a}");
            assert_eq!(Some(inv), f.inv_by_pow(a), "{f} a={a}");
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
    // A field has a generator; a ring with zero divisors or a reducible
    // modulus would not.
    for f in fields_up_to_64() {
        let q = f.q() as u64;
        let has_generator = (1..f.q()).any(|g| {
            let mut x = 1;
            (1..q).all(|e| {
                x = f.mul(x, g);
                x != 1 || e == q - 1
            })
        });
        assert!(has_generator, "{f}");
    }
}

/// Trace of the GF(p)-linear map `y ↦ x·y`, read off its matrix in the
/// polynomial basis. Equals the field trace and shares no code with it.
fn trace_via_multiplication_matrix(f: &Field, x: u32) -> u32 {
    let p = f.p();
    let mut acc = 0;
    for i in 0..f.m() {
        let basis = p.pow(i);
        let image = f.mul(x, basis);
        acc = (acc + (image / p.pow(i)) % p) % p;
    }
    acc
}

#[test]
fn trace_matches_multiplication_matrix_oracle() {
    for f in fields_up_to_64() {
        for x in 0..f.q() {
            assert_eq!(f.trace(x), trace_via_multiplication_matrix(&f, x), "{f} x={x}");
        }
    }
}

#[test]
fn trace_is_linear_and_balanced() {
    for f in fields_up_to_64() {
        let p = f.p();
        let mut fiber = vec![0u32; p as usize];
        for x in 0..f.q() {
            let tx = f.trace(x);
            assert!(tx < p);
            fiber[tx as usize] += 1;
            for y in 0..f.q() {
                let ty = f.trace(y);
                for c in 0..p {
                    let lhs = f.trace(f.add(f.mul(c, x), y));
                    assert_eq!(lhs, (c * tx + ty) % p, "{f} x={x} y={y} c={c}");
                }
            }
        }
        assert!(fiber.iter().all(|&n| n == f.q() / p), "{f}: {fiber:?}");
    }
}

#[test]
fn gf4_and_gf8_tables_by_hand() {
    // GF(4) with α² = α + 1: values 0, 1, α = 2, α + 1 = 3.
    let f4 = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
    let table = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(f4.mul(a, b), table[a as usize][b as usize]);
        }
    }
    assert_eq!((0..4).map(|x| f4.trace(x)).collect::<Vec<_>>(), vec![0, 0, 1, 1]);

    // GF(8) with α³ = α + 1: α·α² = α³ = 0b011, α²·α² = α⁴ = α² + α = 0b110.
    let f8 = Field::new(2, 3, Some(&[1, 1, 0, 1])).unwrap();
    assert_eq!(f8.mul(0b010, 0b100), 0b011);
    assert_eq!(f8.mul(0b100, 0b100), 0b110);
    // tr(1) = m mod 2 = 1 in GF(8).
    assert_eq!(f8.trace(1), 1);
}
