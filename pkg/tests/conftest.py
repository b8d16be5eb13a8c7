import os
import tempfile

os.environ.setdefault('GAMMABENCH_LOG_DIR', tempfile.mkdtemp(prefix='gammabench-logs-'))

import pytest

from gammabench.mpcore import PrecisionContext, Validation


@pytest.fixture(scope='session')
def ctx():
    return PrecisionContext(bits=384, validation=Validation.PRECISION_DOUBLING, guard_bits=64)


@pytest.fixture(scope='session')
def fast_ctx():
    return PrecisionContext(bits=256, validation=Validation.NONE, guard_bits=64)
