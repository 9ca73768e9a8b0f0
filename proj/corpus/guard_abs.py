def guardAbs(x: int) -> int:
    m = abs(x)
    if m < 0:
        return -1
    return m
