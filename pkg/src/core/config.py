"""Settings loader: bench rules file plus environment overrides."""
import json
import logging
import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

DEFAULT_RULES_PATH = Path(__file__).resolve().parents[2] / "config" / "bench_rules.json"


class SizeGuards(BaseModel):
    brute: int = Field(10, ge=1)
    dp: int = Field(26, ge=1, le=62)


class Tolerances(BaseModel):
    cost: float = 1e-9
    ip_objective: float = 1e-6
    gap_claim: float = 1.05


class Fig3Defaults(BaseModel):
    n: int = Field(15, ge=2)
    m_start: int = 14
    m_stop: int = 105
    m_step: int = Field(7, ge=1)
    instances: int = Field(5, ge=1)
    greedy_runs: int = Field(10, ge=1)
    cost: str = "reciprocal:1"
    master_seed: int = Field(42, ge=0)

    def m_values(self):
        return list(range(self.m_start, self.m_stop + 1, self.m_step))


class BenchSettings(BaseModel):
    schema_version: int = Field(1, alias="schema")
    size_guards: SizeGuards = SizeGuards()
    tolerances: Tolerances = Tolerances()
    fig3: Fig3Defaults = Fig3Defaults()
    threads: int = Field(0, ge=0)

    model_config = {"populate_by_name": True}

    @property
    def worker_count(self) -> int:
        return self.threads or os.cpu_count() or 1


def load_settings(path: Optional[Path] = None) -> BenchSettings:
    """Load bench rules, falling back to built-in defaults."""
    rules_path = Path(path or os.getenv("NANIP_CONFIG", "") or DEFAULT_RULES_PATH)
    raw = {}
    try:
        if rules_path.exists():
            with open(rules_path, "r") as f:
                raw = json.load(f)
            logger.info(f"Loaded bench rules from {rules_path}")
        else:
            logger.warning(f"Bench rules not found at {rules_path}, using defaults")
    except Exception as e:
        logger.warning(f"Could not load bench rules: {e}")
        raw = {}

    settings = BenchSettings.model_validate(raw)

    threads = os.getenv("NANIP_THREADS")
    if threads:
        try:
            settings.threads = max(0, int(threads))
        except ValueError:
            logger.warning(f"Ignoring NANIP_THREADS={threads!r}: not an integer")
    return settings
