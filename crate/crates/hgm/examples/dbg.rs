fn main() {
    use hgm::family::parse_family;
    use num_rational::BigRational;
    // Phi_2^5/Phi_1^5 at t = 1024: ord_3(1023) = 1 (odd), orthogonal, c_3 = 1 -> degree 4.
    let p = parse_family("[1,1,1,1,1];[2,2,2,2,2]").unwrap();
    let t = BigRational::from(num_bigint::BigInt::from(1024));
    let mut tr = vec![];
    for e in 1..=5u32 {
        tr.push(hgm::arith::trace_degenerate_probe(&p, &t, 3u64.pow(e)).unwrap());
    }
    println!("p=3 t=1024 traces={tr:?}");
    // assemble
    let c = hgm::lseries::coeffs_from_traces(&tr).unwrap();
    println!("assembled={c:?}");
}
