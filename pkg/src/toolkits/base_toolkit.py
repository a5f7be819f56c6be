import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

from src.helpers.cubic.curve import CubicForm

logger = logging.getLogger("toolkits.base_toolkit")


class ToolkitError(Exception):
    """Base exception for toolkit errors"""
    pass


class ToolkitConfigurationError(ToolkitError):
    """Raised when a toolkit config entry or action parameter is invalid"""
    pass


class ToolkitNotReadyError(ToolkitError):
    """Raised when an action needs a curve the toolkit was not configured with"""
    pass


@dataclass
class ActionParameter:
    name: str
    required: bool
    type: type
    description: str


@dataclass
class Action:
    name: str
    parameters: List[ActionParameter]
    description: str

    def validate_params(self, params: Dict[str, Any]) -> List[str]:
        errors = []
        for param in self.parameters:
            if param.required and params.get(param.name) is None:
                errors.append(f"Missing required parameter: {param.name}")
            elif params.get(param.name) is not None:
                try:
                    params[param.name] = param.type(params[param.name])
                except (TypeError, ValueError):
                    errors.append(f"Invalid type for {param.name}. Expected {param.type.__name__}")
        unknown = set(params) - {param.name for param in self.parameters}
        if unknown:
            errors.append(f"Unknown parameters: {', '.join(sorted(unknown))}")
        return errors


class BaseToolkit(ABC):
    """A named group of actions over one curve, configured from a fixture config entry"""

    def __init__(self, config: Dict[str, Any]):
        try:
            self.actions: Dict[str, Action] = {}
            self.config = self.validate_config(config)
            self.curve: Optional[CubicForm] = None
            self.register_actions()
        except Exception as e:
            logger.error(f"Could not initialize the {config.get('name', 'unknown')} toolkit")
            raise e

    @property
    def needs_curve(self) -> bool:
        return True

    @abstractmethod
    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """
        Validate a config entry from the fixture JSON and fill in defaults

        Args:
            config: dictionary with the toolkit's config values

        Returns:
            Dict[str, Any]: the completed config

        Raises:
            ToolkitConfigurationError: if a value has the wrong type or range
        """

    @abstractmethod
    def register_actions(self) -> None:
        """Populate self.actions with action name -> Action"""

    def configure(self, curve: Optional[CubicForm] = None, **overrides) -> bool:
        """
        Attach the curve the actions run on, and apply config overrides

        Returns:
            bool: True if the toolkit is ready afterwards
        """
        if curve is not None:
            self.curve = curve
        if overrides:
            self.config = self.validate_config({**self.config, **{k: v for k, v in overrides.items() if v is not None}})
        return self.is_configured()

    def is_configured(self, verbose: bool = False) -> bool:
        ready = self.curve is not None or not self.needs_curve
        if verbose and not ready:
            logger.error(f"❌ {self.config['name']} toolkit has no curve loaded")
        return ready

    def _require_curve(self) -> CubicForm:
        if self.curve is None:
            raise ToolkitNotReadyError(f"The {self.config['name']} toolkit has no curve loaded")
        return self.curve

    def perform_action(self, action_name: str, kwargs: Optional[Dict[str, Any]] = None) -> Any:
        """
        Validate parameters and dispatch to the method named after the action

        Raises:
            KeyError: if the action is not registered
            ToolkitConfigurationError: if the parameters are invalid
        """
        if action_name not in self.actions:
            raise KeyError(f"Unknown action: {action_name}")
        kwargs = dict(kwargs or {})
        errors = self.actions[action_name].validate_params(kwargs)
        if errors:
            raise ToolkitConfigurationError(f"Invalid parameters for {action_name}: {', '.join(errors)}")
        handler: Callable = getattr(self, action_name.replace("-", "_"))
        return handler(**kwargs)


def check_int_options(config: Dict[str, Any], minimums: Dict[str, int]) -> Dict[str, Any]:
    """Coerce integer options and check their lower bounds"""
    for key, minimum in minimums.items():
        try:
            config[key] = int(config[key])
        except (TypeError, ValueError):
            raise ToolkitConfigurationError(f"{config.get('name')}: {key} must be an integer, got {config[key]!r}")
        if config[key] < minimum:
            raise ToolkitConfigurationError(f"{config.get('name')}: {key} must be at least {minimum}")
    return config
