use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module<T>(f: impl FnOnce(&Bound<'_, PyModule>) -> PyResult<T>) -> T {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "leopnt")?;
        leopnt_py::leopnt_module(&m)?;
        f(&m)
    })
    .unwrap()
}

#[test]
fn plan_and_budgets() {
    with_module(|m| {
        let plan = m.getattr("plan_doppler")?.call1(("cold", "x1", "inclined", 500.0))?;
        let bins: Vec<(f64, f64, f64)> = plan.getattr("bins")?.extract()?;
        assert!((bins[0].0 - 31813.4).abs() / 31813.4 < 0.003);
        assert!(bins.windows(2).all(|w| w[1].0 < w[0].0));
        let cit: Option<f64> = m.getattr("max_coherent_integration")?.call1((230.0, 0.5))?.extract()?;
        assert!((cit.unwrap() - (0.5f64 / 460.0).sqrt()).abs() < 1e-12);
        let code: f64 = m.getattr("carrier_to_code")?.call1(("x5", 172.0))?.extract()?;
        assert!((code - 172.0 * 10.23e6 / 1190.51625e6).abs() < 1e-12);
        Ok(())
    });
}

#[test]
fn codes_and_modem() {
    with_module(|m| {
        let gold: Vec<Vec<i8>> = m.getattr("gold_family")?.call0()?.extract()?;
        assert_eq!(gold.len(), 1025);
        let r: Vec<i64> = m.getattr("circular_correlation")?.call1((gold[3].clone(), gold[9].clone()))?.extract()?;
        // direct-sum oracle
        let n = 1023;
        let direct: Vec<i64> =
            (0..n).map(|k| (0..n).map(|i| gold[3][i] as i64 * gold[9][(i + k) % n] as i64).sum()).collect();
        assert_eq!(r, direct);
        let prn: Vec<i8> = m.getattr("x5_code")?.call1(("0101011100100",))?.extract()?;
        let tx: Vec<i8> = m.getattr("csk_modulate")?.call1((prn.clone(), 77u32))?.extract()?;
        let rx: Vec<f64> = tx.iter().map(|&c| c as f64).collect();
        let (v, metric, _): (u8, f64, f64) = m.getattr("csk_demodulate")?.call1((rx, prn))?.extract()?;
        assert_eq!(v, 77);
        assert_eq!(metric, 10230.0);
        Ok(())
    });
}

#[test]
fn constellation_and_errors() {
    with_module(|m| {
        let c = m.getattr("Constellation")?.getattr("nominal")?.call1(("gps-24",))?;
        assert_eq!(c.len()?, 24);
        let obs = c.call_method1("observe", (30.0, 1000.0))?;
        assert!(obs.len()? >= 4);
        let err = m.getattr("Constellation")?.getattr("nominal")?.call1(("nope",)).unwrap_err();
        Python::attach(|py| assert!(err.is_instance(py, &m.getattr("LeopntError").unwrap())));
        Ok(())
    });
}
