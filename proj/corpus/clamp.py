def clamp(x: int, lo: int, hi: int) -> int:
    if x < lo or x > hi:
        if x < lo:
            return lo
        return hi
    return x
