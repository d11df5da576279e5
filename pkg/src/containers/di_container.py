"""
Dependency Injection Container.

Manages application dependencies and their lifecycle.
Follows Service Locator pattern for dependency resolution.
"""

from logging import getLogger
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Type, TypeVar

from src.config.settings import AppConfig, SettingsManager
from src.core.cell24 import Cell24, build_cell24
from src.services.report_service import ReportService

logger = getLogger(__name__)

T = TypeVar("T")


class DIContainer:
    """
    Dependency Injection Container.

    Manages the creation and lifecycle of application components.
    Supports singleton pattern for shared instances.
    """

    def __init__(self, config_path: Optional[Path] = None):
        """
        Initialize DI container.

        Args:
            config_path: Optional settings file; defaults are used when None
        """
        self._singletons: Dict[Type, Any] = {}
        self._factories: Dict[Type, Callable] = {}
        self._config_path = Path(config_path) if config_path else None

        self._register_default_factories()

        logger.debug("DIContainer initialized")

    def _register_default_factories(self):
        """Register default factory methods for common types."""
        self._factories[AppConfig] = self._create_app_config
        self._factories[Cell24] = self._create_cell
        self._factories[ReportService] = self._create_report_service

    # ============ Factory Methods ============

    def _create_app_config(self) -> AppConfig:
        """Load settings from the configured file, or use defaults."""
        if self._config_path is None:
            return AppConfig()
        manager = SettingsManager(self._config_path, create_missing=False)
        logger.info(f"Loaded settings from {self._config_path}")
        return manager.config

    def _create_cell(self) -> Cell24:
        """Create the ideal 24-cell."""
        cell = build_cell24()
        logger.debug("Created Cell24")
        return cell

    def _create_report_service(
        self,
        cell: Optional[Cell24] = None,
        config: Optional[AppConfig] = None,
    ) -> ReportService:
        """Create ReportService instance."""
        if cell is None:
            cell = self.get(Cell24)
        if config is None:
            config = self.get(AppConfig)

        service = ReportService(cell, config)
        logger.debug("Created ReportService")
        return service

    # ============ Public API ============

    def get(self, type_: Type[T]) -> T:
        """
        Get instance of specified type.

        Args:
            type_: Type to retrieve

        Returns:
            Instance of requested type

        Raises:
            ValueError: If type is not registered
        """
        if type_ in self._singletons:
            return self._singletons[type_]

        if type_ not in self._factories:
            raise ValueError(f"Type {type_.__name__} is not registered in container")

        instance = self._factories[type_]()
        self._singletons[type_] = instance
        return instance

    def register(self, type_: Type[T], instance: T):
        """
        Register a singleton instance.

        Args:
            type_: Type to register
            instance: Instance to use
        """
        self._singletons[type_] = instance
        logger.debug(f"Registered singleton: {type_.__name__}")

    def register_factory(self, type_: Type[T], factory: Callable[..., T]):
        """Build type_ lazily with factory on first get()."""
        self._factories[type_] = factory
        logger.debug(f"Registered factory: {type_.__name__}")

    def is_registered(self, type_: Type) -> bool:
        return type_ in self._factories or type_ in self._singletons

    def clear(self):
        """Drop all singletons."""
        self._singletons.clear()
        logger.debug("Container cleared")

    def shutdown(self):
        """Shutdown container."""
        self.clear()


class ApplicationContainer(DIContainer):
    """
    Application-specific DI container.

    Provides convenience properties for the application's dependencies.
    """

    @property
    def config(self) -> AppConfig:
        """Get application settings."""
        return self.get(AppConfig)

    @property
    def cell(self) -> Cell24:
        """Get the ideal 24-cell."""
        return self.get(Cell24)

    @property
    def report_service(self) -> ReportService:
        """Get report service."""
        return self.get(ReportService)


# ============ Global Container Instance ============

_global_container: Optional[ApplicationContainer] = None


def get_container(config_path: Optional[Path] = None) -> ApplicationContainer:
    """
    Get global container instance.

    Args:
        config_path: Optional settings file, used when the container is created

    Returns:
        ApplicationContainer instance
    """
    global _global_container

    if _global_container is None:
        _global_container = ApplicationContainer(config_path)

    return _global_container


def reset_container():
    """Reset global container instance."""
    global _global_container

    if _global_container:
        _global_container.shutdown()
        _global_container = None
