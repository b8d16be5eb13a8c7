import os
import logging
import threading

import mpmath
from mpmath import libmp
from dotenv import load_dotenv

load_dotenv()

LOG_DIR = os.getenv('GAMMABENCH_LOG_DIR', 'logs')
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def get_logger(name, level=logging.INFO):
    logger = logging.getLogger(name)
    if not logger.handlers:
        os.makedirs(LOG_DIR, exist_ok=True)
        handler = logging.FileHandler(os.path.join(LOG_DIR, f'{name}.log'), encoding='utf-8')
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.setLevel(level)
    return logger


backend_logger = get_logger('backend')
error_logger = get_logger('errors', logging.ERROR)

MPZ = libmp.MPZ

_local = threading.local()


def mp_context(bits):
    """Return this thread's mpmath context fixed at `bits` of precision.

    Contexts are never shared between threads, so functions that adjust
    ctx.prec internally cannot disturb a concurrent evaluation.
    """
    contexts = getattr(_local, 'contexts', None)
    if contexts is None:
        contexts = _local.contexts = {}
    ctx = contexts.get(bits)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.prec = bits
        contexts[bits] = ctx
    return ctx


class ArithmeticBackend:
    def __init__(self):
        self.settings = {
            'bits': int(os.getenv('GAMMABENCH_BITS', '384')),
            'guard_bits': int(os.getenv('GAMMABENCH_GUARD_BITS', '64')),
            'validate': os.getenv('GAMMABENCH_VALIDATE', 'double'),
            'rel_tol': os.getenv('GAMMABENCH_REL_TOL', '1e-12'),
            'workers': int(os.getenv('GAMMABENCH_WORKERS', '1')),
        }
        self.name = libmp.BACKEND
        backend_logger.info(f"Backend configured: mpmath {mpmath.__version__} ({self.name}), "
                            f"{self.settings['bits']} bits, validate={self.settings['validate']}")

    def test_backend(self, bits=None):
        bits = bits or self.settings['bits']
        try:
            mp = mp_context(bits)
            # agm-based pi against Machin's formula
            machin = 4 * (4 * mp.atan(mp.mpf(1) / 5) - mp.atan(mp.mpf(1) / 239))
            pi_ok = abs(mp.pi - machin) < mp.ldexp(1, 8 - bits)
            e_ok = abs(mp.e - mp.exp(1)) < mp.ldexp(1, 8 - bits)
            ln2_ok = abs(mp.ln2 - mp.log(2)) < mp.ldexp(1, 8 - bits)
            ok = bool(pi_ok and e_ok and ln2_ok)
            if ok:
                backend_logger.info(f"Backend constants verified at {bits} bits")
            else:
                error_logger.error(f"Backend constants disagree at {bits} bits: "
                                   f"pi={pi_ok} e={e_ok} ln2={ln2_ok}")
            return ok
        except Exception as e:
            error_logger.error(f"Backend check failed: {e}")
            return False
