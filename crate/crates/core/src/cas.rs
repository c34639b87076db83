//! Client for an optional external computer-algebra backend.
//!
//! The protocol is line-oriented: one request per line, one response line
//! terminated by the sentinel token `END`. Coefficient lists are serialized
//! space-separated in ascending degree, integers in decimal, rationals as
//! `num/den`; multiple lists are separated by `;`. Verbs:
//!
//! ```text
//! UNITGROUP c0 .. cd                    -> OK w t0 .. t_{d-1} ; u0 .. ; .. END
//! UNITDECOMP c0 .. cd ; e0 .. e_{d-1}   -> OK t n1 .. nr END
//! PADIC c0 .. cd                        -> OK 0|1 END
//! ```
//!
//! Backend answers are never trusted blindly: every algebraic claim with a
//! cheap exact check is re-verified locally by the callers.

use crate::poly::RatPoly;
use crate::rat::BigRat;
use num_traits::Zero;
use sha2::{Digest, Sha256};
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CasError {
    #[error("no CAS backend configured or backend failed to start: {0}")]
    BackendUnavailable(String),
    #[error("CAS backend timed out after {0:?}")]
    Timeout(Duration),
    #[error("CAS protocol error: {0}")]
    ProtocolError(String),
    #[error("element is not a unit")]
    NotAUnit,
}

/// Backend configuration. `command` is whitespace-split; the cache directory
/// is advisory and safe to delete.
#[derive(Clone, Debug)]
pub struct CasConfig {
    pub command: Option<Vec<String>>,
    pub timeout: Duration,
    pub cache_dir: Option<PathBuf>,
    pub enabled: bool,
    /// Responses larger than this are rejected as protocol errors.
    pub max_response_bytes: usize,
}

impl Default for CasConfig {
    fn default() -> Self {
        CasConfig {
            command: None,
            timeout: Duration::from_secs(60),
            cache_dir: None,
            enabled: false,
            max_response_bytes: 16 << 20,
        }
    }
}

impl CasConfig {
    /// Read `SOS_CAS_CMD` from the environment; disabled when unset.
    pub fn from_env() -> Self {
        let mut cfg = CasConfig::default();
        if let Ok(cmd) = std::env::var("SOS_CAS_CMD") {
            cfg.set_command_line(&cmd);
        }
        cfg
    }

    pub fn set_command_line(&mut self, line: &str) {
        let parts: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        if !parts.is_empty() {
            self.command = Some(parts);
            self.enabled = true;
        }
    }

    /// Stable identifier for certificates and reports.
    pub fn backend_id(&self) -> String {
        match (&self.enabled, &self.command) {
            (true, Some(cmd)) => format!("cas:{}", cmd.join(" ")),
            _ => "native".to_string(),
        }
    }
}

fn serialize_rat(q: &BigRat) -> String {
    use num_traits::One;
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn serialize_poly(f: &RatPoly, pad_to: usize) -> String {
    (0..pad_to.max(f.coeffs().len()))
        .map(|i| serialize_rat(&f.coeff(i)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_rat(tok: &str) -> Result<BigRat, CasError> {
    tok.parse::<BigRat>()
        .map_err(|e| CasError::ProtocolError(format!("bad rational {tok:?}: {e}")))
}

thread_local! {
    static BACKEND_CALLS: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

/// Number of backend transactions issued by this thread (cache hits count).
pub fn backend_call_count() -> u64 {
    BACKEND_CALLS.with(|c| c.get())
}

/// Run one request through the cache and the backend.
fn transact(cfg: &CasConfig, request: &str) -> Result<String, CasError> {
    if !cfg.enabled {
        return Err(CasError::BackendUnavailable("backend disabled".into()));
    }
    BACKEND_CALLS.with(|c| c.set(c.get() + 1));
    let key = {
        let mut h = Sha256::new();
        h.update(request.as_bytes());
        format!("{:x}", h.finalize())
    };
    if let Some(dir) = &cfg.cache_dir {
        let path = dir.join(format!("{key}.resp"));
        if let Ok(text) = std::fs::read_to_string(&path) {
            return Ok(text);
        }
    }
    let response = run_backend(cfg, request)?;
    if let Some(dir) = &cfg.cache_dir {
        let _ = std::fs::create_dir_all(dir);
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        if std::fs::write(&tmp, &response).is_ok() {
            let _ = std::fs::rename(&tmp, dir.join(format!("{key}.resp")));
        }
    }
    Ok(response)
}

fn run_backend(cfg: &CasConfig, request: &str) -> Result<String, CasError> {
    let cmd = cfg
        .command
        .as_ref()
        .ok_or_else(|| CasError::BackendUnavailable("no command configured".into()))?;
    let mut child = Command::new(&cmd[0])
        .args(&cmd[1..])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| CasError::BackendUnavailable(format!("{}: {e}", cmd[0])))?;
    {
        let mut stdin = child.stdin.take().expect("piped stdin");
        stdin
            .write_all(format!("{request}\n").as_bytes())
            .map_err(|e| CasError::BackendUnavailable(format!("write failed: {e}")))?;
    }
    let mut stdout = child.stdout.take().expect("piped stdout");
    let limit = cfg.max_response_bytes;
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let mut buf = String::new();
        let result = stdout
            .by_ref()
            .take(limit as u64 + 1)
            .read_to_string(&mut buf)
            .map(|_| buf);
        let _ = tx.send(result);
    });
    let out = match rx.recv_timeout(cfg.timeout) {
        Ok(Ok(buf)) => buf,
        Ok(Err(e)) => {
            let _ = child.kill();
            let _ = child.wait();
            return Err(CasError::BackendUnavailable(format!("read failed: {e}")));
        }
        Err(_) => {
            let _ = child.kill();
            let _ = child.wait();
            return Err(CasError::Timeout(cfg.timeout));
        }
    };
    let _ = child.wait();
    if out.len() > limit {
        return Err(CasError::ProtocolError(format!(
            "response exceeds {limit} bytes"
        )));
    }
    let line = out
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| CasError::ProtocolError("empty response".into()))?;
    Ok(line.trim().to_string())
}

/// Tokenize a response: must start with OK and end with the END sentinel.
fn parse_ok_line(line: &str) -> Result<Vec<String>, CasError> {
    let toks: Vec<String> = line.split_whitespace().map(str::to_string).collect();
    if toks.last().map(String::as_str) != Some("END") {
        return Err(CasError::ProtocolError(
            "response not terminated by END".into(),
        ));
    }
    match toks.first().map(String::as_str) {
        Some("OK") => Ok(toks[1..toks.len() - 1].to_vec()),
        Some("ERR") => Err(CasError::ProtocolError(format!(
            "backend error: {}",
            toks[1..toks.len() - 1].join(" ")
        ))),
        _ => Err(CasError::ProtocolError("response must begin with OK".into())),
    }
}

/// Raw unit-group data as returned by the backend: torsion order, torsion
/// generator and fundamental units as residue polynomials.
#[derive(Clone, Debug)]
pub struct RawUnitGroup {
    pub torsion_order: u64,
    pub torsion_gen: RatPoly,
    pub fundamental_units: Vec<RatPoly>,
}

/// Query the unit group of `Q[x]/(u)` for a monic irreducible
/// integer-coefficient generator.
pub fn cas_unit_group_raw(u: &RatPoly, cfg: &CasConfig) -> Result<RawUnitGroup, CasError> {
    let d = u.deg();
    let request = format!("UNITGROUP {}", serialize_poly(u, 0));
    let toks = parse_ok_line(&transact(cfg, &request)?)?;
    // OK w t0..t_{d-1} ; unit ; unit ...
    if toks.is_empty() {
        return Err(CasError::ProtocolError("missing torsion order".into()));
    }
    let w: u64 = toks[0]
        .parse()
        .map_err(|_| CasError::ProtocolError(format!("bad torsion order {:?}", toks[0])))?;
    let mut lists: Vec<Vec<BigRat>> = vec![Vec::new()];
    for t in &toks[1..] {
        if t == ";" {
            lists.push(Vec::new());
        } else {
            lists.last_mut().unwrap().push(parse_rat(t)?);
        }
    }
    if lists[0].len() != d {
        return Err(CasError::ProtocolError(format!(
            "torsion generator must have {d} coordinates"
        )));
    }
    let torsion_gen = RatPoly::new(lists[0].clone());
    let mut units = Vec::new();
    for l in &lists[1..] {
        if l.is_empty() {
            continue;
        }
        if l.len() != d {
            return Err(CasError::ProtocolError(format!(
                "unit must have {d} coordinates"
            )));
        }
        units.push(RatPoly::new(l.clone()));
    }
    Ok(RawUnitGroup {
        torsion_order: w,
        torsion_gen,
        fundamental_units: units,
    })
}

/// Decompose a unit over the backend's basis:
/// `e = zeta^t * prod u_i^{n_i}` exactly.
pub fn cas_unit_decompose_raw(
    field_gen: &RatPoly,
    elem: &RatPoly,
    cfg: &CasConfig,
) -> Result<(u64, Vec<i64>), CasError> {
    let d = field_gen.deg();
    let request = format!(
        "UNITDECOMP {} ; {}",
        serialize_poly(field_gen, 0),
        serialize_poly(elem, d)
    );
    let toks = parse_ok_line(&transact(cfg, &request)?)?;
    if toks.is_empty() {
        return Err(CasError::ProtocolError("missing torsion exponent".into()));
    }
    let t: u64 = toks[0]
        .parse()
        .map_err(|_| CasError::ProtocolError(format!("bad torsion exponent {:?}", toks[0])))?;
    let mut exps = Vec::new();
    for tok in &toks[1..] {
        let n: i64 = tok
            .parse()
            .map_err(|_| CasError::ProtocolError(format!("bad exponent {tok:?}")))?;
        exps.push(n);
    }
    Ok((t, exps))
}

/// Ask the backend whether `f` is irreducible over the 2-adic numbers.
///
/// The local Newton-polygon sufficient test must never be contradicted: when
/// it certifies irreducibility but the backend denies it, the backend is
/// broken and we fail loudly.
pub fn cas_padic_irreducible(f: &RatPoly, cfg: &CasConfig) -> Result<bool, CasError> {
    let request = format!("PADIC {}", serialize_poly(f, 0));
    let toks = parse_ok_line(&transact(cfg, &request)?)?;
    let verdict = match toks.first().map(String::as_str) {
        Some("1") => true,
        Some("0") => false,
        other => {
            return Err(CasError::ProtocolError(format!(
                "PADIC expects 0 or 1, got {other:?}"
            )))
        }
    };
    if !verdict
        && !f.constant_term().is_zero()
        && crate::reduce::np_irreducible_sufficient(f)
    {
        return Err(CasError::ProtocolError(
            "backend denies an irreducibility certified by the Newton polygon".into(),
        ));
    }
    Ok(verdict)
}

#[cfg(test)]
pub(crate) mod testutil {
    use std::io::Write;
    use std::path::{Path, PathBuf};

    /// Write an executable script that answers canned protocol lines.
    /// `table` maps exact request lines to response lines.
    pub fn fake_backend(dir: &Path, table: &[(&str, &str)]) -> PathBuf {
        let mut body = String::from("#!/usr/bin/env python3\nimport sys\nTABLE = {\n");
        for (req, resp) in table {
            body.push_str(&format!("  {req:?}: {resp:?},\n"));
        }
        body.push_str(
            "}\nline = sys.stdin.readline().strip()\nprint(TABLE.get(line, 'ERR unknown request END'))\n",
        );
        let path = dir.join("fake_cas.py");
        let mut fh = std::fs::File::create(&path).unwrap();
        fh.write_all(body.as_bytes()).unwrap();
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
        }
        path
    }

    pub fn config_for(script: &Path, cache: Option<&Path>) -> super::CasConfig {
        super::CasConfig {
            command: Some(vec![
                "python3".to_string(),
                script.to_string_lossy().to_string(),
            ]),
            timeout: std::time::Duration::from_secs(20),
            cache_dir: cache.map(Path::to_path_buf),
            enabled: true,
            max_response_bytes: 1 << 20,
        }
    }
}
