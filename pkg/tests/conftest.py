import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from renyi_lab.algebra import AlgebraSpec  # noqa: E402

C2 = AlgebraSpec.commutative([1.0, 1.0])
C3 = AlgebraSpec.commutative([1.0, 1.0, 1.0])
M2 = AlgebraSpec.full(2)
M3 = AlgebraSpec.full(3)
M2_M1 = AlgebraSpec((2, 1), (1.0, 1.0))
M2_M3 = AlgebraSpec((2, 3), (1.0, 0.5))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[C2, M2, M2_M1, M2_M3], ids=["C2", "M2", "M2+M1", "M2+M3"])
def spec(request):
    return request.param
