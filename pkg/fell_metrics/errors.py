from typing import Any, Optional, Tuple


class FellMetricsError(ValueError):
    """Базовая ошибка библиотеки"""


class AmbientMismatchError(FellMetricsError):
    """Операнды лежат в разных объемлющих пространствах"""


class DomainError(FellMetricsError):
    """Точка или компакт не лежит в области определения"""

    def __init__(self, message: str, point: Optional[Any] = None):
        super().__init__(message)
        self.point = point


class InjectivityError(FellMetricsError):
    """Отображение не инъективно; witness: две точки с общим значением"""

    def __init__(self, message: str, witness: Tuple[Any, Any]):
        super().__init__(message)
        self.witness = witness


class IncompatibilityError(FellMetricsError):
    """Отображения расходятся на пересечении областей"""

    def __init__(self, message: str, point: Any):
        super().__init__(message)
        self.point = point


class RepresentationError(FellMetricsError):
    """Объект не представим в нужном виде (например, образ не открыт)"""


class PreconditionError(FellMetricsError):
    """Нарушено предусловие операции"""


class HypothesisError(FellMetricsError):
    """Не выполнены условия теоремы; witness: точка-свидетель"""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class ToleranceError(FellMetricsError):
    """Недопустимая точность"""


class SearchExhaustedError(FellMetricsError):
    """Ограниченный поиск не нашел свидетеля (это не доказательство отсутствия)"""

    def __init__(self, message: str, bound: int):
        super().__init__(message)
        self.bound = bound


class ParseError(FellMetricsError):
    """Ошибка разбора входного файла или выражения"""


class ConfigError(FellMetricsError):
    """Некорректное значение конфигурации"""
