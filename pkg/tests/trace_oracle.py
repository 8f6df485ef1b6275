"""Independent replay of the generator's documented draw order.

Shares no code with map2d: its own SplitMix64 and rejection sampler.
"""

M = (1 << 64) - 1


def _outputs(state):
    while True:
        state = (state + 0x9E3779B97F4A7C15) & M
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M
        yield z ^ (z >> 31)


def _rint(gen, lo, hi):
    k = hi - lo + 1
    lim = 2**64 - 2**64 % k
    for x in gen:
        if x < lim:
            return lo + x % k


def replay(state, p):
    g = _outputs(state)
    n = _rint(g, *p.room_count_range)
    t = _rint(g, *p.tunnel_range)
    rooms = [(_rint(g, 0, p.rows - 1), _rint(g, 0, p.cols - 1),
              _rint(g, *p.room_rows_range), _rint(g, *p.room_cols_range)) for _ in range(n)]
    num, den = p.skip_probability.numerator, p.skip_probability.denominator
    connected, directions = [], []
    for _ in range(n - 1):
        tok = _rint(g, 0, den - 1)
        c = not (1 <= tok <= num)
        connected.append(c)
        directions.append(_rint(g, 0, 1) if c else None)
    return n, t, rooms, connected, directions
