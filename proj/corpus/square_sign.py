def squareSign(d: int) -> int:
    s = d * d
    if s >= 0:
        return 1
    return 0
