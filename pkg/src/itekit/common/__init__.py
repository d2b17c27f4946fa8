from .formatting import fmt, jsonable
from .parallel import parallel_map
from .poleindex import PoleIndex
