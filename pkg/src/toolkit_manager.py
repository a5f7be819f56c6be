import logging
from typing import Any, Dict, List, Optional, Type

from src.helpers.cubic.curve import CubicForm
from src.toolkits.base_toolkit import BaseToolkit, ToolkitConfigurationError, ToolkitNotReadyError
from src.toolkits.bounds_toolkit import BoundsToolkit
from src.toolkits.curve_toolkit import CurveToolkit
from src.toolkits.descent_toolkit import DescentToolkit
from src.toolkits.detmethod_toolkit import DetMethodToolkit
from src.toolkits.group_toolkit import GroupToolkit

logger = logging.getLogger("toolkit_manager")

TOOLKIT_NAMES = ("curve", "group", "descent", "detmethod", "bounds")


class ToolkitManager:
    def __init__(self, fixture_config: List[Dict[str, Any]], shared: Optional[Dict[str, Any]] = None):
        """
        Args:
            fixture_config: per-toolkit config entries, each with a "name"
            shared: values every toolkit that knows the key receives (origin, rank)
        """
        self.toolkits: Dict[str, BaseToolkit] = {}
        entries = {entry["name"]: entry for entry in fixture_config if "name" in entry}
        unknown = set(entries) - set(TOOLKIT_NAMES)
        if unknown:
            raise ToolkitConfigurationError(f"Unknown toolkits in fixture config: {', '.join(sorted(unknown))}")
        for name in TOOLKIT_NAMES:
            self._register_toolkit({**self._shared_for(name, shared or {}), **entries.get(name, {"name": name})})

    @staticmethod
    def _shared_for(name: str, shared: Dict[str, Any]) -> Dict[str, Any]:
        accepted = {"group": ("origin",), "descent": ("origin", "rank"), "detmethod": ("origin",),
                    "bounds": ("rank",)}.get(name, ())
        return {key: shared[key] for key in accepted if shared.get(key) is not None}

    @staticmethod
    def _class_name_to_type(class_name: str) -> Type[BaseToolkit]:
        if class_name == "curve":
            return CurveToolkit
        elif class_name == "group":
            return GroupToolkit
        elif class_name == "descent":
            return DescentToolkit
        elif class_name == "detmethod":
            return DetMethodToolkit
        elif class_name == "bounds":
            return BoundsToolkit
        return None

    def _register_toolkit(self, config_dic: Dict[str, Any]) -> None:
        name = config_dic["name"]
        toolkit_class = self._class_name_to_type(name)
        self.toolkits[name] = toolkit_class(config_dic)

    def configure(self, curve: Optional[CubicForm] = None, overrides: Optional[Dict[str, Dict[str, Any]]] = None) -> bool:
        """Attach the curve to every toolkit and apply per-toolkit overrides"""
        overrides = overrides or {}
        ready = True
        for name, toolkit in self.toolkits.items():
            ready = toolkit.configure(curve, **overrides.get(name, {})) and ready
        return ready

    def list_toolkits(self) -> None:
        logger.info("\nAVAILABLE TOOLKITS:")
        for name, toolkit in self.toolkits.items():
            status = "✅ Ready" if toolkit.is_configured() else "❌ No curve loaded"
            logger.info(f"- {name}: {status}")

    def list_actions(self, toolkit_name: str) -> None:
        toolkit = self.toolkits[toolkit_name]
        logger.info(f"\nAVAILABLE ACTIONS ({toolkit_name}):")
        for action_name, action in toolkit.actions.items():
            logger.info(f"- {action_name}: {action.description}")
            for param in action.parameters:
                req = "required" if param.required else "optional"
                logger.info(f"    - {param.name} ({req}): {param.description}")

    def perform_action(self, toolkit_name: str, action_name: str, params: Optional[Dict[str, Any]] = None) -> Any:
        """
        Run one action of one toolkit.

        Errors are logged and re-raised so the caller can map them to exit codes.
        """
        try:
            toolkit = self.toolkits[toolkit_name]
        except KeyError:
            raise ToolkitConfigurationError(f"Unknown toolkit '{toolkit_name}', expected one of {TOOLKIT_NAMES}")
        if not toolkit.is_configured(verbose=True):
            raise ToolkitNotReadyError(f"Toolkit '{toolkit_name}' is not configured")
        if action_name not in toolkit.actions:
            raise ToolkitConfigurationError(f"Unknown action '{action_name}' for toolkit '{toolkit_name}'")
        try:
            return toolkit.perform_action(action_name, params or {})
        except Exception as e:
            logger.debug(f"Action {action_name} of {toolkit_name} failed: {e}")
            raise
