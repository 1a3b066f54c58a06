"""
Pipeline Settings
Tunable constants for the certificate pipeline, saved to and loaded from JSON
"""

import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Union

logger = logging.getLogger(__name__)


class SettingsError(ValueError):
    """Malformed settings file or out-of-range value"""


@dataclass
class PipelineSettings:
    """Defaults for every run; CLI flags override a loaded file"""
    seed: int = 0
    retries: int = 32               # collision resampling and genericity samples
    oracle_cap: int = 16            # largest |A| for the O(|A|^4) energy oracle
    initial_box: int = 8            # half-width M of the first normal-vector box
    box_batch: int = 4              # samples per box size before M doubles
    partner_rule: str = "smallest-neighbour"
    gp_ratio: str = "2"
    random_bound: int = 10          # |numerators|, |denominators| <= M for random sets

    def validate(self) -> 'PipelineSettings':
        if self.retries < 1:
            raise SettingsError(f"retries must be >= 1, got {self.retries}")
        if self.oracle_cap < 1:
            raise SettingsError(f"oracle_cap must be >= 1, got {self.oracle_cap}")
        if self.initial_box < 1 or self.box_batch < 1:
            raise SettingsError("initial_box and box_batch must be >= 1")
        if self.partner_rule not in ("smallest-neighbour", "spanning-tree"):
            raise SettingsError(f"unknown partner rule {self.partner_rule!r}")
        if self.random_bound < 1:
            raise SettingsError(f"random_bound must be >= 1, got {self.random_bound}")
        return self

    def override(self, **changes) -> 'PipelineSettings':
        """Copy with the non-None changes applied"""
        data = asdict(self)
        data.update({k: v for k, v in changes.items() if v is not None})
        return PipelineSettings(**data).validate()


def load_settings(path: Optional[Union[str, Path]] = None) -> PipelineSettings:
    """
    Load settings from a JSON object, falling back to defaults

    Missing file: defaults. Unknown keys or bad values: SettingsError.
    """
    if path is None:
        return PipelineSettings()

    path = Path(path)
    if not path.exists():
        logger.info("settings file %s not found, using defaults", path)
        return PipelineSettings()

    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise SettingsError(f"{path}: not valid JSON ({e})") from e

    if not isinstance(data, dict):
        raise SettingsError(f"{path}: expected a JSON object")

    known = {f.name for f in fields(PipelineSettings)}
    unknown = set(data) - known
    if unknown:
        raise SettingsError(f"{path}: unknown settings {sorted(unknown)}")

    try:
        return PipelineSettings(**data).validate()
    except TypeError as e:
        raise SettingsError(f"{path}: {e}") from e


def save_settings(settings: PipelineSettings, path: Union[str, Path]) -> bool:
    """Save settings as a JSON object"""
    try:
        with open(path, 'w') as f:
            json.dump(asdict(settings), f, indent=2)
        return True
    except OSError as e:
        logger.error("Error saving settings: %s", e)
        return False
