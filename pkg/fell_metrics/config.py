import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError

# Данные из .env файла
load_dotenv()

DEFAULT_TOL = "1/4096"
DEFAULT_SEED = 42
DEFAULT_SAMPLES = 100
DEFAULT_FORMAT = "json"
DEFAULT_SEARCH_BOUND = 4096

OUTPUT_FORMATS = ("json", "csv")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"Переменная {name} должна быть целым числом, получено {raw!r}")
    if value < 0:
        raise ConfigError(f"Переменная {name} должна быть неотрицательной, получено {raw!r}")
    return value


def _env_tolerance(name: str, default: str) -> Fraction:
    raw = os.getenv(name) or default
    try:
        value = Fraction(raw.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"Переменная {name} должна быть рациональным числом, получено {raw!r}")
    if value <= 0:
        raise ConfigError(f"Переменная {name} должна быть положительной, получено {raw!r}")
    return value


@dataclass(frozen=True)
class Settings:
    """Настройки по умолчанию для CLI и наборов проверок"""
    tolerance: Fraction
    seed: int
    samples: int
    output_format: str
    search_bound: int


def load_settings(tolerance: Optional[Fraction] = None,
                  seed: Optional[int] = None,
                  samples: Optional[int] = None,
                  output_format: Optional[str] = None) -> Settings:
    """
    Собирает настройки: аргументы важнее переменных окружения,
    переменные окружения важнее значений по умолчанию

    Args:
        tolerance: Точность вычисления метрик
        seed: Зерно генератора случайных чисел
        samples: Размер выборки для проверок аксиом
        output_format: Формат вывода (json или csv)

    Returns:
        Объект Settings
    """
    fmt = output_format or os.getenv("FELL_METRICS_FORMAT") or DEFAULT_FORMAT
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"Неизвестный формат вывода: {fmt!r}")

    return Settings(
        tolerance=tolerance if tolerance is not None else _env_tolerance("FELL_METRICS_TOL", DEFAULT_TOL),
        seed=seed if seed is not None else _env_int("FELL_METRICS_SEED", DEFAULT_SEED),
        samples=samples if samples is not None else _env_int("FELL_METRICS_SAMPLES", DEFAULT_SAMPLES),
        output_format=fmt,
        search_bound=_env_int("FELL_METRICS_SEARCH_BOUND", DEFAULT_SEARCH_BOUND),
    )
