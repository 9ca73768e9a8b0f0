def fixedLoop() -> int:
    i = 0
    s = 0
    while i < 2:
        s = s + i
        i = i + 1
    return s
