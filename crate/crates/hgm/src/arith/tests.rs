use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::gauss::CyclotomicElement;
use super::*;
use crate::family::parse_family;
use crate::geometry;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn legendre_split_matches_elliptic_oracle() {
    let p = parse_family("[-2,-2,1,1,1,1]").unwrap();
    for t in [rat(2, 1), rat(3, 1), rat(1, 2), rat(-1, 1)] {
        for q in [5u64, 7, 11, 13, 17] {
            if prime_kind(&p, &t, q) != PrimeKind::Good {
                continue;
            }
            let ap = geometry::elliptic_ap(&t, q).unwrap();
            let tr = trace_split(&p, &t, q).unwrap();
            assert_eq!(tr, BigInt::from(ap), "t={t} q={q}");
        }
    }
}

#[test]
fn legendre_gross_koblitz_matches_elliptic_oracle() {
    let p = parse_family("[-2,-2,1,1,1,1]").unwrap();
    for t in [rat(2, 1), rat(3, 1), rat(1, 2), rat(-1, 1)] {
        for q in [5u64, 7, 11, 13] {
            if prime_kind(&p, &t, q) != PrimeKind::Good {
                continue;
            }
            let ap = geometry::elliptic_ap(&t, q).unwrap();
            let tr = trace(&p, &t, q).unwrap();
            assert_eq!(tr, BigInt::from(ap), "t={t} q={q}");
        }
    }
}

#[test]
fn gamma_form_equals_j_form() {
    let cases = [
        ("[-2,-2,1,1,1,1]", rat(2, 1), 5u64),
        ("[-2,-2,1,1,1,1]", rat(3, 1), 13),
        ("[-2,1,1]", rat(5, 2), 7),
        ("[-3,1,2]", rat(2, 1), 7),
        ("[-3,1,2]", rat(2, 1), 13),
        ("[-4,-1,2,3]", rat(3, 1), 13),
        ("[1,5];[2,3,4]", rat(2, 1), 11),
    ];
    for (text, t, q) in cases {
        let p = parse_family(text).unwrap();
        let table = CharacterTable::new(q).unwrap();
        if (q - 1) % p.m != 0 {
            continue;
        }
        let a = trace_split_with_table(&p, &t, &table).unwrap();
        let b = trace_split_direct(&p, &t, &table).unwrap();
        assert_eq!(a, b, "{text} t={t} q={q}");
    }
}

#[test]
fn split_matches_gross_koblitz_on_overlap() {
    let cases = [
        ("[-2,-2,1,1,1,1]", rat(2, 1), 9u64),
        ("[-2,1,1]", rat(5, 2), 7),
        ("[-3,1,2]", rat(2, 1), 49),
        ("[-4,-1,2,3]", rat(3, 1), 13),
        ("[1,5];[2,3,4]", rat(2, 1), 11),
        ("[1,5];[2,3,4]", rat(7, 3), 31),
    ];
    for (text, t, q) in cases {
        let p = parse_family(text).unwrap();
        if (q - 1) % p.m != 0 {
            continue;
        }
        let a = trace_split(&p, &t, q).unwrap();
        let b = trace(&p, &t, q).unwrap();
        assert_eq!(a, b, "{text} t={t} q={q}");
    }
}

#[test]
fn quadratic_family_is_the_discriminant_character() {
    // H([-2,1,1], t) is rank one, weight zero: the trace over F_q is
    // the quadratic character of 1 - t (discriminant of y^2 - y + t/4).
    let p = parse_family("[-2,1,1]").unwrap();
    for (t, q) in [
        (rat(5, 2), 7u64),
        (rat(3, 1), 7),
        (rat(2, 1), 7),
        (rat(3, 1), 11),
        (rat(5, 1), 13),
        (rat(2, 1), 9),
    ] {
        if prime_kind(&p, &t, nt::factor(q)[0].0) != PrimeKind::Good {
            continue;
        }
        let table = CharacterTable::new(q).unwrap();
        let disc = BigRational::one() - &t;
        let img = table.fq.embed_rational(&disc).unwrap();
        let chi = if img == 0 {
            0
        } else if table.fq.dlog(img) % 2 == 0 {
            1
        } else {
            -1
        };
        assert_eq!(
            trace_split(&p, &t, q).unwrap(),
            BigInt::from(chi),
            "t={t} q={q}"
        );
        assert_eq!(trace(&p, &t, q).unwrap(), BigInt::from(chi));
    }
}

#[test]
fn weight_zero_trinomials_count_roots() {
    for (a, b) in [(1u32, 2u32), (2, 3)] {
        let gamma_text = format!("[{},{},{}]", -((a + b) as i64), a, b);
        let p = parse_family(&gamma_text).unwrap();
        let t = rat(3, 1);
        for q in [7u64, 11, 13, 49] {
            let pp = nt::factor(q)[0].0;
            if prime_kind(&p, &t, pp) != PrimeKind::Good {
                continue;
            }
            let model = geometry::trinomial_model(a, b, &t).unwrap();
            let roots = model.root_count(q).unwrap();
            let tr = trace(&p, &t, q).unwrap();
            assert_eq!(
                tr,
                BigInt::from(roots as i64 - 1),
                "(a,b)=({a},{b}) q={q}"
            );
        }
    }
}

#[test]
fn rank_six_weight_zero_family_paper_values() {
    // q0 = Phi_3 Phi_12 / (Phi_1 Phi_2 Phi_8) at t = 3/2:
    // F_5 = 1 - x - x^5 + x^6 gives c_{5,1} = 1 and c_{5,2} = 1.
    let p = parse_family("[1,2,8];[3,12]").unwrap();
    assert_eq!(p.n, 6);
    let t = rat(3, 2);
    assert_eq!(trace(&p, &t, 5).unwrap(), BigInt::one());
    assert_eq!(trace(&p, &t, 25).unwrap(), BigInt::one());
    assert_eq!(trace_split(&p, &t, 25).unwrap(), BigInt::one());
}

#[test]
fn choice_independence() {
    let cases = [
        ("[-2,-2,1,1,1,1]", rat(2, 1), 13u64),
        ("[-3,1,2]", rat(5, 1), 13),
        ("[-4,-1,2,3]", rat(3, 1), 13),
    ];
    for (text, t, q) in cases {
        let p = parse_family(text).unwrap();
        let base = trace_split(&p, &t, q).unwrap();
        for (j, c) in [(5u64, 2u64), (7, 3), (11, 5)] {
            if nt::gcd_u64(j, q - 1) != 1 {
                continue;
            }
            let table = CharacterTable::with_choices(q, j, c).unwrap();
            assert_eq!(
                trace_split_with_table(&p, &t, &table).unwrap(),
                base,
                "{text} omega^{j} psi_{c}"
            );
            assert_eq!(trace_split_direct(&p, &t, &table).unwrap(), base);
        }
    }
}

#[test]
fn split_trace_satisfies_exact_cyclotomic_identity() {
    // Independent ground truth in Z[mu_{(q-1)p}]: the computed trace T
    // must satisfy sum_s chi^s(t (-1)^n) prod_j Ghat(a_j+s) Ghat(-b_j-s)
    // = T (1-q) q^{-E} * prod_j Ghat(a_j) Ghat(-b_j), all exactly.
    let param = parse_family("[-2,-2,1,1,1,1]").unwrap();
    let t = rat(2, 1);
    let q = 5u64;
    let tr = trace_split(&param, &t, q).unwrap();
    assert_eq!(tr, BigInt::from(-2)); // elliptic oracle value

    let table = CharacterTable::new(q).unwrap();
    let n_ring = (q - 1) * table.fq.p;
    let ghat = |k: i64| -> CyclotomicElement {
        let kk = k.rem_euclid((q - 1) as i64) as u64;
        let g = gauss_sum(&table, kk).unwrap();
        let mut neg = CyclotomicElement::zero(n_ring);
        for (i, c) in g.coeffs.iter().enumerate() {
            neg.coeffs[i] = -c;
        }
        neg
    };
    let spec = EngineSpec::from_param(&param, &t).unwrap();
    let e_pref = spec.prefactor_exponent();
    assert_eq!(e_pref, 0);
    let a_exp: Vec<i64> = param
        .alpha
        .iter()
        .map(|a| ((q - 1) as i64) * *a.numer() / *a.denom())
        .collect();
    let b_exp: Vec<i64> = param
        .beta
        .iter()
        .map(|b| ((q - 1) as i64) * *b.numer() / *b.denom())
        .collect();
    // chi-argument t * (-1)^n with n = 2.
    let tbar = table.fq.embed_rational(&t).unwrap();
    let dl = table.fq.dlog(tbar);
    let mut lhs = CyclotomicElement::zero(n_ring);
    for s in 0..(q - 1) as i64 {
        let mut term = CyclotomicElement::monomial(
            n_ring,
            (s as u64 * dl % (q - 1)) * table.fq.p % n_ring,
        );
        for &a in &a_exp {
            term = term.mul(&ghat(a + s));
        }
        for &b in &b_exp {
            term = term.mul(&ghat(-b - s));
        }
        lhs.add_assign(&term);
    }
    let mut rhs = CyclotomicElement::scalar(n_ring, &tr * BigInt::from(1 - q as i64));
    for &a in &a_exp {
        rhs = rhs.mul(&ghat(a));
    }
    for &b in &b_exp {
        rhs = rhs.mul(&ghat(-b));
    }
    assert!(lhs.equals(&rhs), "exact cyclotomic identity failed");
}

#[test]
fn erased_traces_wild_example() {
    // H(Phi_2^5/Phi_1^5, 2^10) at p = 2: the erased factor is
    // (1-4x)(1+5x+10x^2+80x^3+256x^4), so c_1 = -1 and c_2 = 21.
    let p = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
    let t = BigRational::from(BigInt::from(1024));
    assert_eq!(k_crit(&p, 2), 10);
    assert_eq!(trace_erased(&p, &t, 2, 1).unwrap(), BigInt::from(-1));
    assert_eq!(trace_erased(&p, &t, 2, 2).unwrap(), BigInt::from(21));
    // The erased lists have m = 1; every power is split.
    assert_eq!(trace_erased_split(&p, &t, 2, 1).unwrap(), BigInt::from(-1));
    assert_eq!(trace_erased_split(&p, &t, 2, 2).unwrap(), BigInt::from(21));
}

#[test]
fn erased_requires_ramp_bottom() {
    let p = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
    let t = rat(8, 1);
    assert!(matches!(
        trace_erased(&p, &t, 2, 1),
        Err(Error::Domain(_))
    ));
}

#[test]
fn bad_prime_rejection() {
    let p = parse_family("[-2,-2,1,1,1,1]").unwrap();
    // p = 2 is wild; p = 3 divides t - 1 = 3 (tame); p = 5 divides t = 5 (tame).
    assert!(matches!(
        trace_split(&p, &rat(4, 1), 2),
        Err(Error::BadPrime { kind: "wild", .. })
    ));
    assert!(matches!(
        trace(&p, &rat(4, 1), 3),
        Err(Error::BadPrime { kind: "tame", .. })
    ));
    assert!(matches!(
        trace(&p, &rat(5, 1), 5),
        Err(Error::BadPrime { kind: "tame", .. })
    ));
    // Good but non-split: [-3,1,2] has m = 6, and 5 - 1 = 4 is not 0 mod 6.
    let p2 = parse_family("[-3,1,2]").unwrap();
    assert!(matches!(
        trace_split(&p2, &rat(7, 1), 5),
        Err(Error::NonSplit { .. })
    ));
    // Wild beats non-split for Legendre at q = 8.
    assert!(matches!(
        trace_split(&p, &rat(2, 1), 8),
        Err(Error::BadPrime { kind: "wild", .. })
    ));
}

#[test]
fn prime_kind_classification() {
    let p = parse_family("[-8,3,5]").unwrap();
    let t = rat(7, 11);
    assert_eq!(prime_kind(&p, &t, 2), PrimeKind::Wild);
    assert_eq!(prime_kind(&p, &t, 3), PrimeKind::Wild);
    assert_eq!(prime_kind(&p, &t, 5), PrimeKind::Wild);
    assert_eq!(prime_kind(&p, &t, 7), PrimeKind::Tame);
    assert_eq!(prime_kind(&p, &t, 11), PrimeKind::Tame);
    assert_eq!(prime_kind(&p, &t, 13), PrimeKind::Good);
    // t - 1 = -4/11: no extra tame primes beyond 2 (already wild).
    let one = rat(1, 1);
    assert_eq!(prime_kind(&p, &one, 7), PrimeKind::Good);
}
