def modBound(x: int) -> int:
    r = x % 2
    if r > 1:
        return -1
    i = 0
    if i > 0:
        return -2
    return r
