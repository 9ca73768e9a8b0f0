def absPlus(a: int) -> int:
    v = abs(a) + 1
    if v > 0:
        return v
    return 0
