# Shared fixtures and import paths for the binoid-hk test suite.
import os
import sys

import pytest

project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)
sys.path.insert(0, os.path.join(project_root, 'src'))
sys.path.insert(0, os.path.join(project_root, 'config'))

from config import HKConfig
from presentation.dsl_parser import parse_presentation


@pytest.fixture
def config():
    return HKConfig(
        completion_budget=20_000,
        enumeration_cap=200_000,
        subset_cap=10,
        unit_search_cap=1_000,
        threads=1,
        assume_cancellative=False,
        assume_semipositive=False,
        log_level='WARNING',
        log_dir='',
    )


@pytest.fixture
def weighted():
    """4X + 12Y = 16Z, difference group Z^2 x Z/4, e_HK 13"""
    return parse_presentation("binoid X,Y,Z | 4X + 12Y = 16Z")


@pytest.fixture
def cube_relation():
    return parse_presentation("binoid x,y | 3x = 3y")


@pytest.fixture
def path_complex():
    return parse_presentation("sr a,b,c; facet a,b; facet b,c")
