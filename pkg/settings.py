"""
lambda-reciprocation — configuration, presets and run log
━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
Config file format (reciprocation.config):

  # comment
  alpha          = 2
  lambda0_t      = 0:pi:pi/64
  delta_ratio    = 0.1
  Delta_over_g1  = 100

Precedence: defaults < preset < config file < CLI flags.
"""

from __future__ import annotations
import json, logging, os, sys, uuid
from datetime import datetime
from typing import Any, Dict, Optional

from errors import ConfigError

logger = logging.getLogger(__name__)

# ─── CONFIG ────────────────────────────────────────────────────────────────────
_BASE        = os.path.dirname(os.path.abspath(__file__))
CONFIG_PATH  = os.path.join(_BASE, "reciprocation.config")

DEFAULTS: Dict[str, str] = {
    "alpha":               "2",
    "lambda0_t":           "pi/2",
    "delta_ratio":         "0.1",
    "Delta_over_g1":       "100",
    "outcome":             "g2g1",
    "path":                "closed",
    "fock_dim":            "",
    "workers":             "1",
    "omega_over_lambda0":  "0",
    "e_g1":                "0",
    "g1":                  "1",
    "retrieval_lambda0_t": "",
    "cross_check":         "false",
    "log_level":           "WARNING",
}

PRESETS: Dict[str, Dict[str, str]] = {
    "paper-regime":     {"Delta_over_g1": "100", "delta_ratio": "0.1"},
    "degenerate-raman": {"Delta_over_g1": "100", "delta_ratio": "0"},
    "weak-dispersive":  {"Delta_over_g1": "5",   "delta_ratio": "0.1"},
}

# dispersive validity flags (reported, never enforced)
MIN_DELTA_OVER_G = 20.0
MAX_EPSILON      = 0.05
# closed-form regime for δ/λ0
MAX_CLOSED_FORM_RATIO = 0.2


def status(icon: str, message: str) -> None:
    """Human status line on stderr; data files never receive these."""
    print(f"{icon} {message}", file=sys.stderr)


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, str]:
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"{source}:{lineno}: unknown key '{key}'. Allowed: {sorted(DEFAULTS)}")
        values[key] = value
    return values


def resolve_preset(name: Optional[str]) -> Dict[str, str]:
    if not name:
        return {}
    if name not in PRESETS:
        raise ConfigError(f"Unknown preset '{name}'. Allowed values: {sorted(PRESETS)}")
    return dict(PRESETS[name])


def load_config(path: Optional[str] = None, preset: Optional[str] = None) -> Dict[str, str]:
    cfg = dict(DEFAULTS)
    cfg.update(resolve_preset(preset))
    explicit = path is not None
    path = path or CONFIG_PATH
    if os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                cfg.update(parse_config_text(f.read(), source=path))
            status("✅", f"Config loaded from {path}")
        except OSError as e:
            if explicit:
                raise ConfigError(f"Cannot read config {path}: {e}")
            status("⚠️ ", f"Cannot read config: {e} — using defaults")
    elif explicit:
        raise ConfigError(f"Config file not found: {path}")
    else:
        status("ℹ️ ", f"{os.path.basename(path)} not found — using defaults")
    return cfg


def parse_bool(value: str) -> bool:
    v = str(value).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"Not a boolean: '{value}'")


# ─── LOGGING ───────────────────────────────────────────────────────────────────
def setup_logging(level: str = "WARNING") -> None:
    numeric = logging.getLevelName(str(level).upper())
    if not isinstance(numeric, int):
        raise ConfigError(f"Unknown log level '{level}'")
    logging.basicConfig(
        level=numeric,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)-7s %(name)s: %(message)s",
    )


# ─── RUN LOG (sidecar) ─────────────────────────────────────────────────────────
def sidecar_path(out_path: str) -> str:
    return f"{out_path}.meta.json"


def write_run_log(out_path: Optional[str], category: str, event_type: str,
                  severity: str = "INFO", extra: Optional[dict] = None,
                  duration_ms: Optional[int] = None, message: Optional[str] = None) -> Optional[dict]:
    """Write one run record next to a data file. Failures are logged, never raised."""
    record: Dict[str, Any] = {
        "log_id":      str(uuid.uuid4()),
        "ts":          datetime.now().strftime("%Y-%m-%dT%H:%M:%S"),
        "category":    category,
        "event_type":  event_type,
        "severity":    severity,
        "extra":       extra or {},
        "duration_ms": duration_ms,
        "message":     message,
    }
    if not out_path:
        return record
    try:
        with open(sidecar_path(out_path), "w", encoding="utf-8") as f:
            json.dump(record, f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        logger.warning("write_run_log error: %s", e)
    return record
