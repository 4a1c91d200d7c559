from pathlib import Path

import pytest

from apichain.signatures import AbstractionTable

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def table() -> AbstractionTable:
    return AbstractionTable.default()


@pytest.fixture(scope="session")
def trycatch_path() -> Path:
    return DATA_DIR / "trycatch.edges"


@pytest.fixture(scope="session")
def small_table() -> AbstractionTable:
    """Hand-sized table for tests that do not need the full whitelists."""
    return AbstractionTable(
        package_whitelist={
            "android",
            "android.util",
            "android.os",
            "android.os.health",
            "java.lang",
            "java.io",
            "com.google.android.gms.ads",
            "org.json",
        },
        class_whitelist={
            "android.R",
            "android.Manifest",
            "android.util.Log",
            "android.os.Bundle",
            "android.os.health.HealthStats",
            "java.lang.Throwable",
            "java.lang.String",
            "java.io.File",
            "com.google.android.gms.ads.AdView",
            "org.json.JSONObject",
        },
    )
