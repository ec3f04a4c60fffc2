"""Reference description/code pairs used across the suite."""

# (category, description, code)
CATEGORY_EXAMPLES = [
    ("STE", "显示“优惠券已抵扣xx元”，xx为折扣价", "{`优惠券已抵扣${discountPrice}元`}"),
    ("OLE", "动态展示用户昵称，兜底为空", '{ user && user.nick || " " }'),
    ("CE", "如果内容类型为直播，则展示直播时间描述，否则展示营销时间描述",
     "{contentType === 'live' ? liveTimeDesc : marketingTimeDesc}"),
    ("DPE", "动态展示金币展示价格小数部分", '{`${data.coinShowPrice.split(".")[1]}`}'),
]

# (original description, original code, simplified description, simplified code)
LITERAL_EXAMPLES = [
    ("判断是否幸运，条件成立则显示‘恭喜你押中啦’，否则显示‘很遗憾未押中’",
     "{isLucky ? '恭喜你押中啦' : '很遗憾未押中'}",
     "判断是否幸运，条件成立则显示‘<STR1>’，否则显示‘<STR2>’",
     "{isLucky ? '<STR1>' : '<STR2>';}"),
    ("显示‘满xx使用’，xx为起步费",
     "{'满' + startFee + '使用'}",
     "显示‘<STR1> xx <STR2>’，xx为起步费",
     "{'<STR1>' + startFee + '<STR2>';}"),
]

CASE_STUDY_CODES = [
    "{trainHeadTitle || '春运火车票';}",
    "{downTitle || '春运火车票';}",
    "{headBannerTitle || '春运火车票';}",
    "{isShowMid ? title.substring(0, 15) : title.substring(0, 10) || '';}",
    "{isShowMid ? title.substring(0, null) : title.substring(0, 10) || null;}",
    "{isShowMid ? subTitle.substring(0, 16) : subTitle.substring(0, 10) || '';}",
    "{isShowSuccess ? subTitle.substring(0, 16) : subTitle.substring(0, 10) || '';}",
    "{isShowMid ? title.substring(0, 15) : title.substring(null, 15) || '';}",
    "{isShowMid ? title.substring(0, 16) : title.substring(0, 10) || ''}",
]

CONDITIONAL_CODE = "{contentType === 'live' ? liveTimeDesc : marketingTimeDesc;}"


def all_codes():
    codes = [c for _, _, c in CATEGORY_EXAMPLES]
    for _, orig, _, simple in LITERAL_EXAMPLES:
        codes += [orig, simple]
    return codes + CASE_STUDY_CODES + [CONDITIONAL_CODE]
