"""
Runtime settings for dynamo-lab
환경 변수(DYNAMO_LAB_*) 기반 설정
"""

import os
import logging
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

ENV_PREFIX = "DYNAMO_LAB_"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {ENV_PREFIX}{name}={raw!r}, using {default}")
        return default


@dataclass
class Settings:
    """실행 설정"""

    round_budget_factor: int = 4
    round_budget_offset: int = 16
    search_cap: int = 16
    immortal_search_cap: int = 24
    longest_cycle_guard: int = 24
    workers: int = 1
    batch_size: int = 4096
    corpus_seed: int = 2024
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        load_dotenv()
        return cls(
            round_budget_factor=_env_int("ROUND_BUDGET_FACTOR", 4),
            round_budget_offset=_env_int("ROUND_BUDGET_OFFSET", 16),
            search_cap=_env_int("SEARCH_CAP", 16),
            immortal_search_cap=_env_int("IMMORTAL_SEARCH_CAP", 24),
            longest_cycle_guard=_env_int("LONGEST_CYCLE_GUARD", 24),
            workers=max(1, _env_int("WORKERS", 1)),
            batch_size=max(1, _env_int("BATCH_SIZE", 4096)),
            corpus_seed=_env_int("CORPUS_SEED", 2024),
            log_level=os.environ.get(ENV_PREFIX + "LOG_LEVEL", "INFO").upper(),
        )

    def round_budget(self, n: int) -> int:
        """기본 라운드 예산 (4n + 16)"""
        return self.round_budget_factor * n + self.round_budget_offset


# 전역 설정 인스턴스
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """전역 설정 인스턴스 반환"""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None
