"""Shared numeric constants."""

import math

#: absolute constant of the half-sample lower bound:
#: (1/(32 e)) sqrt(pi/2) (1 - 1/(4 sqrt(pi))) ~ 0.0124
HALF_SAMPLE_V0 = (
    1.0 / (32.0 * math.e)
    * math.sqrt(math.pi / 2.0)
    * (1.0 - 1.0 / (4.0 * math.sqrt(math.pi)))
)

#: E|N(0,1)| = sqrt(2/pi), the l1 concentration centering constant
MEAN_ABS_NORMAL = math.sqrt(2.0 / math.pi)
