fn main() {
    let sys = morikawa::eliminator::build_system();
    let el = morikawa::eliminator::eliminate(&sys, &Default::default()).unwrap();
    let s256 = morikawa::series::mu_taylor(&el.reduced, 40, 256).unwrap();
    let s384 = morikawa::series::mu_taylor(&el.reduced, 40, 384).unwrap();
    for i in [20usize, 30, 39, 40] {
        let a = s256.coeff(i);
        let b = s384.coeff(i).with_precision(256);
        let d = (a - &b).abs();
        println!("a{}: {}  diff-exponent 2^{}", i, a.to_decimal_string(20), d.exponent());
    }
    for t in ["0.2", "1.0"] {
        let tv = morikawa::float::ExtFloat::parse_decimal(t, 384).unwrap();
        println!("series384({t}) = {}", s384.evaluate(&tv).to_decimal_string(20));
    }
}
