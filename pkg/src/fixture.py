import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from dotenv import load_dotenv

from src.constants import DEFAULT_FIXTURE_DIR, FIXTURE_DIR_ENV, RANK_PROVENANCE
from src.helpers import parse_point
from src.helpers.cubic.curve import CubicForm, ProjPoint, evaluate
from src.helpers.cubic.errors import CubicError, FixtureError
from src.toolkit_manager import ToolkitManager
from src.types import SmoothnessVerdict

REQUIRED_FIELDS = ["coefficients"]
NEGATIVE_SECTION = "negative"

logger = logging.getLogger("fixture")


def fixture_dir() -> Path:
    load_dotenv()
    return Path(os.getenv(FIXTURE_DIR_ENV, DEFAULT_FIXTURE_DIR))


def resolve_fixture(reference: Union[str, Path], directory: Optional[Path] = None) -> Path:
    """A path to a JSON file, or a fixture name looked up in the fixture directory"""
    path = Path(reference)
    if path.suffix == ".json" or path.exists():
        return path
    directory = directory or fixture_dir()
    for candidate in (directory / f"{reference}.json", directory / NEGATIVE_SECTION / f"{reference}.json"):
        if candidate.exists():
            return candidate
    return directory / f"{reference}.json"


class CurveFixture:
    def __init__(self, reference: Union[str, Path], directory: Optional[Path] = None):
        path = resolve_fixture(reference, directory)
        try:
            with open(path, "r") as file:
                fixture_dict = json.load(file)
        except FileNotFoundError:
            raise FixtureError(f"Curve fixture not found: {path}")
        except json.JSONDecodeError as e:
            raise FixtureError(f"{path} is not valid JSON: {e}")
        if not isinstance(fixture_dict, dict):
            raise FixtureError(f"{path} must hold a JSON object")

        missing_fields = [field for field in REQUIRED_FIELDS if field not in fixture_dict]
        if missing_fields:
            raise FixtureError(f"Missing required fields in {path}: {', '.join(missing_fields)}")

        try:
            self.path = path
            self.name: str = fixture_dict.get("name", path.stem)
            self.form = CubicForm.from_payload(fixture_dict["coefficients"], self.name)
            self.rank: Optional[int] = fixture_dict.get("rank")
            if self.rank is not None:
                self.rank = int(self.rank)
            self.provenance: str = fixture_dict.get("provenance", RANK_PROVENANCE)
            self.base_point: Optional[ProjPoint] = None
            if fixture_dict.get("base_point") is not None:
                self.base_point = parse_point(fixture_dict["base_point"])
                if evaluate(self.form, self.base_point) != 0:
                    raise FixtureError(f"Base point {self.base_point} of {self.name} is not on the curve")
            self.is_negative = path.parent.name == NEGATIVE_SECTION
            self.toolkit_manager = ToolkitManager(
                fixture_dict.get("config", []),
                {"origin": str(self.base_point) if self.base_point else None, "rank": self.rank},
            )
            self.toolkit_manager.configure(self.form)
        except FixtureError:
            raise
        except (CubicError, KeyError, TypeError, ValueError) as e:
            logger.error(f"Could not load curve fixture {path}")
            raise FixtureError(f"Invalid curve fixture {path}: {e}")

    def verdict(self) -> SmoothnessVerdict:
        return self.toolkit_manager.perform_action("curve", "check-smoothness")

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "path": str(self.path),
            "coefficients": [str(c) for c in self.form.coefficients],
            "rank": self.rank,
            "base_point": str(self.base_point) if self.base_point else None,
            "provenance": self.provenance,
            "negative": self.is_negative,
        }


class FixtureCatalog:
    """Curve fixtures in a directory; singular curves only in its negative/ section"""

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory) if directory else fixture_dir()

    def paths(self) -> List[Path]:
        main = sorted(self.directory.glob("*.json"))
        negative = sorted((self.directory / NEGATIVE_SECTION).glob("*.json"))
        return main + negative

    def load(self) -> List[Tuple[CurveFixture, SmoothnessVerdict]]:
        """
        Load every fixture with its smoothness verdict

        Raises:
            FixtureError: if a fixture outside the negative section is singular
        """
        entries = []
        for path in self.paths():
            fixture = CurveFixture(path)
            verdict = fixture.verdict()
            if verdict.kind == "SingularCertified" and not fixture.is_negative:
                raise FixtureError(f"{path} is singular at {verdict.singular_point}; move it to {NEGATIVE_SECTION}/")
            entries.append((fixture, verdict))
        return entries
