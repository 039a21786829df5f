// Copyright 2026 The Sticktionary Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bundled word list for the fallback Chinese segmenter. Biased toward the
// emotional and conversational vocabulary sticker queries use.

#include <cstddef>

namespace sticktionary {

extern const char* const kBundledZhLexicon[] = {
    // laughter and joy
    "哈哈", "哈哈哈", "哈哈哈哈", "嘿嘿", "嘻嘻", "呵呵", "笑死", "笑死我了",
    "大笑", "微笑", "偷笑", "开心", "高兴", "快乐", "幸福", "兴奋", "激动",
    "得意", "骄傲", "满足", "惊喜", "庆祝", "鼓掌", "点赞", "厉害", "牛逼",
    "太棒了", "棒棒", "优秀", "好耶", "耶", "爽",
    // sadness and distress
    "难过", "伤心", "悲伤", "哭泣", "哭哭", "呜呜", "委屈", "心疼", "失望",
    "郁闷", "崩溃", "绝望", "心碎", "可怜", "难受", "孤独", "寂寞", "想哭",
    // anger and dislike
    "生气", "愤怒", "暴怒", "气死", "气死了", "讨厌", "嫌弃", "鄙视", "烦躁",
    "无语", "无奈", "吐槽", "滚开", "闭嘴", "抓狂", "翻白眼",
    // surprise, fear, confusion
    "惊讶", "震惊", "吃惊", "害怕", "恐惧", "紧张", "尴尬", "疑惑", "困惑",
    "疑问", "好奇", "懵逼", "问号", "什么鬼", "发呆",
    // calm and tired
    "淡定", "冷静", "佛系", "躺平", "摸鱼", "无聊", "好累", "累了", "困了",
    "睡觉", "晚安", "早安", "午安", "休息", "放松", "冷漠", "思考",
    // affection and social
    "可爱", "卖萌", "害羞", "抱抱", "亲亲", "比心", "爱你", "想你", "喜欢",
    "谢谢", "感谢", "感动", "温暖", "加油", "拜托", "求求", "对不起", "抱歉",
    "没关系", "你好", "再见", "拜拜", "欢迎", "恭喜", "生日快乐", "新年快乐",
    "好的", "好吧", "收到", "明白", "了解", "同意", "不行", "不要", "可以",
    "吃瓜", "搞笑", "沙雕", "打工人", "干杯", "期待", "等待", "加班",
    // function words and common vocabulary
    "我们", "你们", "他们", "她们", "自己", "什么", "怎么", "为什么", "怎么办",
    "没有", "不是", "就是", "还是", "但是", "因为", "所以", "如果", "虽然",
    "知道", "觉得", "感觉", "真的", "今天", "明天", "昨天", "现在", "已经",
    "一起", "时候", "问题", "东西", "朋友", "大家", "一下", "一点", "有点",
    "这个", "那个", "这样", "那样", "非常", "特别", "一直", "还有", "然后",
    "工作", "学习", "上班", "下班", "周末", "吃饭", "起床", "回家", "老板",
    "同事", "老师", "学生", "妈妈", "爸爸", "手机", "电脑", "游戏", "视频",
    "表情", "表情包", "贴纸", "聊天", "消息", "回复", "看看", "试试",
};

extern const std::size_t kBundledZhLexiconSize =
    sizeof(kBundledZhLexicon) / sizeof(kBundledZhLexicon[0]);

}  // namespace sticktionary
